//! General complex eigendecomposition: Householder reduction to upper
//! Hessenberg form, shifted QR iteration to complex Schur form, and
//! back-substitution for eigenvectors.
//!
//! Residual guarantee: for each returned pair, `‖Mv − λv‖ ≤ κ·ε·‖M‖_F` with
//! `κ` on the order of `n` for diagonalizable input (unit-norm `v`). Near
//! repeated eigenvalues the vectors may be nearly parallel; callers that need
//! eigenspaces should use [`super::null_space`] on `M − λI`.

use num_complex::Complex;

use super::matrix::{vnorm, CMatrix};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::{c, cone, czero, Real, C};

const MAX_ITERS_PER_EIGENVALUE: usize = 60;

#[derive(Clone, Debug)]
pub struct Eigen<T> {
    /// Sorted by [`sort_eigenvalues`] order.
    pub values: Vec<C<T>>,
    /// Unit-norm right eigenvectors as columns.
    pub vectors: CMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// 2-norm condition number of the eigenvector matrix (infinite when singular).
    pub fn condition(&self) -> Result<T> {
        let s = svd(&self.vectors)?;
        Ok(if s.min() == T::zero() {
            T::infinity()
        } else {
            s.max() / s.min()
        })
    }

    /// Largest `‖Mv − λv‖` over all pairs.
    pub fn max_residual(&self, m: &CMatrix<T>) -> T {
        (0..self.values.len())
            .map(|k| {
                let v = self.vectors.column(k);
                let mv = m.mul_vec(&v);
                let r: Vec<C<T>> = mv.iter().zip(&v).map(|(a, b)| a - b * self.values[k]).collect();
                vnorm(&r)
            })
            .fold(T::zero(), T::max)
    }
}

/// Deterministic order: descending modulus, then descending real part, then
/// descending imaginary part. Keys are quantized to `1e-10` of the largest
/// modulus so round-off never reorders values that are equal in exact
/// arithmetic (e.g. `1` and `-1`).
pub fn eigen_order<T: Real>(values: &[C<T>]) -> Vec<usize> {
    let scale = values.iter().fold(T::one(), |acc, z| acc.max(z.norm())).as_f64();
    let q = 1e-10 * scale;
    let key = |z: &C<T>| {
        (
            (z.norm().as_f64() / q).round() as i64,
            (z.re.as_f64() / q).round() as i64,
            (z.im.as_f64() / q).round() as i64,
        )
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(&values[a]), key(&values[b]));
        kb.cmp(&ka).then(a.cmp(&b))
    });
    order
}

pub fn sort_eigenvalues<T: Real>(values: &mut Vec<C<T>>) {
    let order = eigen_order(values);
    *values = order.iter().map(|&i| values[i]).collect();
}

/// Eigenvalues and right eigenvectors of a square matrix.
pub fn eig_general<T: Real>(m: &CMatrix<T>) -> Result<Eigen<T>> {
    let (t, z) = schur(m, true)?;
    let n = m.rows();
    let y = triangular_eigenvectors(&t);
    let mut vectors = &z.expect("schur vectors requested") * &y;
    for k in 0..n {
        let col = vectors.column(k);
        let nrm = vnorm(&col);
        let col: Vec<C<T>> = col.iter().map(|x| x / nrm).collect();
        vectors.set_column(k, &col);
    }
    let raw: Vec<C<T>> = (0..n).map(|i| t[(i, i)]).collect();
    let order = eigen_order(&raw);
    Ok(Eigen {
        values: order.iter().map(|&i| raw[i]).collect(),
        vectors: CMatrix::from_fn(n, n, |i, k| vectors[(i, order[k])]),
    })
}

/// Eigenvalues only (sorted), skipping Schur-vector accumulation.
pub fn eigenvalues<T: Real>(m: &CMatrix<T>) -> Result<Vec<C<T>>> {
    let (t, _) = schur(m, false)?;
    let mut values: Vec<C<T>> = (0..m.rows()).map(|i| t[(i, i)]).collect();
    sort_eigenvalues(&mut values);
    Ok(values)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: Real>(m: &CMatrix<T>) -> Result<T> {
    Ok(eigenvalues(m)?.first().map_or_else(T::zero, |z| z.norm()))
}

/// Complex Schur form `M = Z T Z†` with `T` upper triangular.
pub fn schur<T: Real>(m: &CMatrix<T>, want_vectors: bool) -> Result<(CMatrix<T>, Option<CMatrix<T>>)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut h = m.clone();
    let mut z = want_vectors.then(|| CMatrix::identity(n));
    hessenberg(&mut h, z.as_mut());
    qr_iterate(&mut h, z.as_mut())?;
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok((h, z))
}

fn hessenberg<T: Real>(h: &mut CMatrix<T>, mut z: Option<&mut CMatrix<T>>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vnorm(&x);
        if xnorm == T::zero() {
            continue;
        }
        let phase = if x[0].norm() == T::zero() {
            cone()
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vn = vnorm(&v);
        if vn == T::zero() {
            continue;
        }
        for e in &mut v {
            *e /= vn;
        }
        let two = T::lit(2.0);
        // H <- (I - 2vv†) H
        for j in k..n {
            let s = v
                .iter()
                .enumerate()
                .fold(czero(), |acc, (i, vi)| acc + vi.conj() * h[(k + 1 + i, j)]);
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * two;
            }
        }
        // H <- H (I - 2vv†), Z <- Z (I - 2vv†)
        let right = |mat: &mut CMatrix<T>| {
            for i in 0..mat.rows() {
                let s = v
                    .iter()
                    .enumerate()
                    .fold(czero::<T>(), |acc, (j, vj)| acc + mat[(i, k + 1 + j)] * vj);
                for (j, vj) in v.iter().enumerate() {
                    mat[(i, k + 1 + j)] -= s * vj.conj() * two;
                }
            }
        };
        right(h);
        if let Some(z) = z.as_deref_mut() {
            right(z);
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
}

/// `(c, s, r)` with `[c s; -conj(s) c]·[a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), czero());
    }
    let an = a.norm();
    if an == T::zero() {
        return (T::zero(), b.conj() / bn);
    }
    let norm = an.hypot(bn);
    (an / norm, (a / an) * b.conj() / norm)
}

fn qr_iterate<T: Real>(h: &mut CMatrix<T>, mut z: Option<&mut CMatrix<T>>) -> Result<()> {
    let n = h.rows();
    let eps = T::epsilon();
    let hnorm = h.frobenius();
    if hnorm == T::zero() {
        return Ok(());
    }
    let mut hi = n - 1;
    let mut iter = 0;
    let mut total = 0;
    let mut rotations: Vec<(T, C<T>)> = Vec::with_capacity(n);

    while hi > 0 {
        // deflation scan
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == T::zero() {
                diag = hnorm;
            }
            if sub <= eps * diag {
                h[(lo, lo - 1)] = czero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_ITERS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                routine: "complex schur qr",
                iterations: total,
            });
        }

        let shift = if iter % 11 == 0 {
            // exceptional shift
            h[(hi, hi)] + c(T::lit(0.75) * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            rotations.push((cs, sn));
            let snc = sn.conj();
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * cs + sn * y;
                h[(k + 1, j)] = -snc * x + y * cs;
            }
            h[(k + 1, k)] = czero();
        }
        for (idx, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + idx;
            let snc = sn.conj();
            let apply = |mat: &mut CMatrix<T>, last: usize| {
                for i in 0..=last {
                    let x = mat[(i, k)];
                    let y = mat[(i, k + 1)];
                    mat[(i, k)] = x * cs + y * snc;
                    mat[(i, k + 1)] = -x * sn + y * cs;
                }
            };
            apply(h, (k + 2).min(hi));
            if let Some(z) = z.as_deref_mut() {
                apply(z, n - 1);
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(())
}

fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c_: C<T>, d: C<T>) -> C<T> {
    let half = T::lit(0.5);
    let m = (a - d) * half;
    let disc = (m * m + b * c_).sqrt();
    let mu1 = (a + d) * half + disc;
    let mu2 = (a + d) * half - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Eigenvectors of an upper-triangular matrix (columns), unnormalized.
fn triangular_eigenvectors<T: Real>(t: &CMatrix<T>) -> CMatrix<T> {
    let n = t.rows();
    let smin = (T::epsilon() * t.frobenius()).max(T::min_positive_value());
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = cone();
        for j in (0..k).rev() {
            let mut s = czero::<T>();
            for m in j + 1..=k {
                s += t[(j, m)] * y[(m, k)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < smin {
                denom = Complex::new(smin, T::zero());
            }
            y[(j, k)] = -s / denom;
        }
        // rescale growing columns
        let big = (0..=k).fold(T::zero(), |acc, i| acc.max(y[(i, k)].norm()));
        if big > T::lit(1e100) {
            for i in 0..=k {
                y[(i, k)] /= big;
            }
        }
    }
    y
}
