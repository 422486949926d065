//! One-sided (Hestenes) Jacobi SVD and Hermitian Jacobi eigensolver.
//!
//! Both work on the Gram structure with the same complex 2x2 rotation. The
//! one-sided variant computes small singular values to high relative
//! accuracy, which the null-space and rank decisions rely on.

use num_complex::Complex;

use super::matrix::{dot, vnorm, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(σ) V†` with `k = min(rows, cols)` columns.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: CMatrix<T>,
    /// Descending, nonnegative.
    pub singular_values: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> CMatrix<T> {
        let k = self.singular_values.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.singular_values[j]);
        &us * &self.v.adjoint()
    }

    pub fn max(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }
}

/// Rotation parameters that zero the off-diagonal of the Hermitian 2x2
/// `[[alpha, gamma], [conj(gamma), beta]]`.
///
/// Returns `(c, s·e^{iφ})`; columns update as
/// `p' = c·p − conj(se)·q`, `q' = se·p + c·q`.
fn jacobi_rotation<T: Real>(alpha: T, beta: T, gamma: C<T>) -> (T, C<T>) {
    let g = gamma.norm();
    let phase = gamma / g;
    let zeta = (beta - alpha) / (g + g);
    let t = if zeta == T::zero() {
        T::one()
    } else {
        zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = cs * t;
    (cs, phase * sn)
}

#[inline]
fn rotate_columns<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize, cs: T, se: C<T>) {
    let se_c = se.conj();
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp * cs - se_c * xq;
        m[(i, q)] = se * xp + xq * cs;
    }
}

/// Thin singular value decomposition of any nonempty matrix.
pub fn svd<T: Real>(m: &CMatrix<T>) -> Result<Svd<T>> {
    if m.rows() < m.cols() {
        let t = svd_tall(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    svd_tall(m)
}

fn svd_tall<T: Real>(m: &CMatrix<T>) -> Result<Svd<T>> {
    let (rows, n) = m.shape();
    let mut work = m.clone();
    let mut v = CMatrix::identity(n);
    let tol = T::epsilon() * T::from_count(rows.max(2));
    let negligible = m.frobenius() * T::epsilon() * T::epsilon();

    let mut converged = n == 1;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), czero());
                for i in 0..rows {
                    let a = work[(i, p)];
                    let b = work[(i, q)];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                let g = gamma.norm();
                // Columns far below round-off of the whole matrix are flushed
                // to zero; otherwise their rotations wander in the subnormal
                // range without ever meeting the relative test.
                if alpha.sqrt() <= negligible || beta.sqrt() <= negligible {
                    for (col, norm) in [(p, alpha), (q, beta)] {
                        if norm.sqrt() <= negligible && norm > T::zero() {
                            for i in 0..rows {
                                work[(i, col)] = czero();
                            }
                        }
                    }
                    continue;
                }
                if g == T::zero() || g <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                converged = false;
                let (cs, se) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut work, p, q, cs, se);
                rotate_columns(&mut v, p, q, cs, se);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "jacobi svd",
            iterations: sweeps,
        });
    }

    let mut order: Vec<(T, usize)> = (0..n).map(|j| (vnorm(&work.column(j)), j)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let sigma_max = order[0].0;
    let tiny = T::min_positive_value().sqrt();
    let mut u_cols: Vec<Option<CVector<T>>> = Vec::with_capacity(n);
    let mut v_sorted = CMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        singular_values.push(s);
        v_sorted.set_column(k, &v.column(j));
        if s > tiny && s > sigma_max * tol {
            let col = work.column(j);
            u_cols.push(Some(col.iter().map(|z| z / s).collect()));
        } else {
            u_cols.push(None);
        }
    }
    let u = complete_orthonormal(rows, u_cols);
    Ok(Svd {
        u,
        singular_values,
        v: v_sorted,
    })
}

/// Fill missing columns with unit vectors orthogonal to everything present.
///
/// Each missing column starts from the coordinate vector with the largest
/// component outside the current span (`1 − Σ_b |b_k|²`), which is at least
/// `missing/rows`, so the completion cannot stall.
fn complete_orthonormal<T: Real>(rows: usize, cols: Vec<Option<CVector<T>>>) -> CMatrix<T> {
    let mut basis: Vec<CVector<T>> = cols.iter().flatten().cloned().collect();
    let mut outside = vec![T::one(); rows];
    for b in &basis {
        for (o, z) in outside.iter_mut().zip(b) {
            *o -= z.norm_sqr();
        }
    }
    let mut out = CMatrix::zeros(rows, cols.len());
    for (k, col) in cols.into_iter().enumerate() {
        let col = match col {
            Some(c) => c,
            None => {
                let pick = (0..rows)
                    .max_by(|&a, &b| outside[a].partial_cmp(&outside[b]).unwrap().then(b.cmp(&a)))
                    .expect("nonempty");
                let mut e: CVector<T> = vec![czero(); rows];
                e[pick] = Complex::new(T::one(), T::zero());
                for _ in 0..2 {
                    for b in &basis {
                        let proj = dot(b, &e);
                        for (x, y) in e.iter_mut().zip(b) {
                            *x -= proj * y;
                        }
                    }
                }
                let nrm = vnorm(&e);
                let e: CVector<T> = e.iter().map(|z| z / nrm).collect();
                for (o, z) in outside.iter_mut().zip(&e) {
                    *o -= z.norm_sqr();
                }
                basis.push(e.clone());
                e
            }
        };
        out.set_column(k, &col);
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix<T>,
}

/// Cyclic Jacobi eigensolver. The input is symmetrized as `(M + M†)/2` first.
pub fn eigh<T: Real>(m: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius();
    let tol = T::epsilon() * T::lit(0.5);

    let off = |a: &CMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tol * scale && scale > T::zero() {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "jacobi eigh",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gamma = a[(p, q)];
                if gamma.norm() <= tol * T::lit(0.01) * scale {
                    continue;
                }
                let (cs, se) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, gamma);
                rotate_columns(&mut a, p, q, cs, se);
                // rows: apply the conjugate rotation from the left
                let se_c = se.conj();
                for j in 0..n {
                    let xp = a[(p, j)];
                    let xq = a[(q, j)];
                    a[(p, j)] = xp * cs - se * xq;
                    a[(q, j)] = se_c * xp + xq * cs;
                }
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                rotate_columns(&mut v, p, q, cs, se);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap().then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Inverse of a square matrix by LU with partial pivoting.
pub fn inverse<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
            .unwrap();
        if a[(pivot, k)].norm() == T::zero() {
            return Err(Error::Degenerate("singular matrix in inverse".into()));
        }
        if pivot != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(pivot, j)];
                a[(pivot, j)] = t;
                let t = inv[(k, j)];
                inv[(k, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = t;
            }
        }
        let d = a[(k, k)];
        for j in 0..n {
            a[(k, j)] /= d;
            inv[(k, j)] /= d;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[(i, k)];
            if f.norm() == T::zero() {
                continue;
            }
            for j in 0..n {
                let akj = a[(k, j)];
                let ikj = inv[(k, j)];
                a[(i, j)] -= f * akj;
                inv[(i, j)] -= f * ikj;
            }
        }
    }
    Ok(inv)
}
