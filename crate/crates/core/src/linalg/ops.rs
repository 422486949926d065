use super::matrix::{dot, vnorm, CMatrix, CVector};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Kronecker product `A ⊗ B`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij.re == T::zero() && aij.im == T::zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization: entry `(i, j)` lands at `j·rows + i`.
///
/// Under this convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)`, so the map
/// `X ↦ V X W†` has matrix `conj(W) ⊗ V`.
pub fn vec<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    let (r, c) = m.shape();
    let mut out = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`] for a `d×d` matrix.
pub fn unvec<T: Real>(v: &[C<T>], d: usize) -> Result<CMatrix<T>> {
    if d == 0 || v.len() != d * d {
        return Err(Error::Dimension(format!(
            "cannot unvec a length-{} vector into {d}x{d}",
            v.len()
        )));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| v[j * d + i]))
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    Ok(svd(m)?.singular_values.iter().fold(T::zero(), |a, &s| a + s))
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> Result<T> {
    Ok(svd(m)?.max())
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm<T: Real>(m: &CMatrix<T>) -> T {
    m.frobenius()
}

/// `Tr{A† B}`.
pub fn hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<C<T>> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "HS inner product of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(dot(a.as_slice(), b.as_slice()))
}

/// Orthonormal basis of the numerical kernel of `m`.
///
/// Singular values below `tol·σ_max` count as zero; an all-zero matrix has
/// the full space as kernel. Wide input is padded with zero rows.
pub fn null_space<T: Real>(m: &CMatrix<T>, tol: T) -> Result<Vec<CVector<T>>> {
    null_space_scaled(m, tol, T::zero())
}

/// [`null_space`] with the threshold `tol·max(σ_max, floor)`, so that a
/// matrix which is pure round-off (`σ_max ≪ floor`) is treated as zero.
pub fn null_space_scaled<T: Real>(m: &CMatrix<T>, tol: T, floor: T) -> Result<Vec<CVector<T>>> {
    let (rows, cols) = m.shape();
    let padded;
    let m = if rows < cols {
        padded = m.vstack(&CMatrix::zeros(cols - rows, cols));
        &padded
    } else {
        m
    };
    let s = svd(m)?;
    let scale = s.max().max(floor);
    if scale == T::zero() {
        return Ok(CMatrix::<T>::identity(cols).columns());
    }
    Ok(s.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv < tol * scale)
        .map(|(k, _)| s.v.column(k))
        .collect())
}

/// Orthonormal basis of the numerical column space of `m` (same rank rule as
/// [`null_space`]).
pub fn range_space<T: Real>(m: &CMatrix<T>, tol: T) -> Result<Vec<CVector<T>>> {
    let s = svd(m)?;
    let smax = s.max();
    if smax == T::zero() {
        return Ok(Vec::new());
    }
    Ok(s.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv >= tol * smax)
        .map(|(k, _)| s.u.column(k))
        .collect())
}

/// The `count` right singular vectors of `m` with the smallest singular
/// values, together with the largest of those singular values.
pub fn smallest_singular_subspace<T: Real>(m: &CMatrix<T>, count: usize) -> Result<(Vec<CVector<T>>, T)> {
    let s = svd(m)?;
    let k = s.singular_values.len();
    if count > k {
        return Err(Error::Dimension(format!("requested {count} of {k} singular vectors")));
    }
    let vectors = (k - count..k).map(|j| s.v.column(j)).collect();
    let worst = if count == 0 {
        T::zero()
    } else {
        s.singular_values[k - count]
    };
    Ok((vectors, worst))
}

/// Orthonormalize a set of vectors (modified Gram–Schmidt, twice), dropping
/// any whose residual norm falls below `tol`.
pub fn orthonormalize<T: Real>(vectors: &[CVector<T>], tol: T) -> Vec<CVector<T>> {
    let mut basis: Vec<CVector<T>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let n = vnorm(&w);
        if n > tol {
            basis.push(w.iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// `‖(I − QQ†) v‖` where `Q` has orthonormal columns `basis`.
pub fn projection_residual<T: Real>(basis: &[CVector<T>], v: &[C<T>]) -> T {
    let mut w = v.to_vec();
    for b in basis {
        let p = dot(b, &w);
        for (x, y) in w.iter_mut().zip(b) {
            *x -= p * y;
        }
    }
    vnorm(&w)
}

/// Symmetric distance between two subspaces given by orthonormal bases: the
/// largest residual of projecting either basis onto the other. Infinite when
/// the dimensions differ.
pub fn subspace_distance<T: Real>(a: &[CVector<T>], b: &[CVector<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    let one_way = |x: &[CVector<T>], y: &[CVector<T>]| {
        x.iter()
            .map(|v| projection_residual(y, v))
            .fold(T::zero(), T::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩`.
pub fn gram<T: Real>(vectors: &[CVector<T>]) -> Option<CMatrix<T>> {
    if vectors.is_empty() {
        return None;
    }
    let k = vectors.len();
    Some(CMatrix::from_fn(k, k, |i, j| dot(&vectors[i], &vectors[j])))
}

/// Maximum entrywise deviation of the Gram matrix from the identity.
pub fn orthonormality_defect<T: Real>(vectors: &[CVector<T>]) -> T {
    gram(vectors).map_or_else(T::zero, |g| g.max_abs_diff(&CMatrix::identity(vectors.len())))
}
