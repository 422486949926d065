//! Fixed spaces `F(T) = Ker(I − T)` and the checks built on them.

use crate::channel::{KrausChannel, Side, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{
    dot, null_space_scaled, orthonormality_defect, subspace_distance, svd, unvec, vec, CMatrix, CVector,
};
use crate::scalar::Real;

/// HS-orthonormal basis of a fixed space, as `d×d` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedSpaceBasis<T> {
    pub basis: Vec<CMatrix<T>>,
    pub tol: T,
}

impl<T: Real> FixedSpaceBasis<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Vectorized basis elements.
    pub fn vectors(&self) -> Vec<CVector<T>> {
        self.basis.iter().map(vec).collect()
    }

    /// Deviation of the HS Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> T {
        orthonormality_defect(&self.vectors())
    }

    /// Largest `‖L vec(B) − vec(B)‖` over basis elements.
    pub fn fixed_residual(&self, l: &Superoperator<T>) -> T {
        self.vectors()
            .iter()
            .map(|v| {
                let lv = l.matrix().mul_vec(v);
                crate::linalg::vnorm(&lv.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>())
            })
            .fold(T::zero(), T::max)
    }

    /// Subspace distance to the span of `others` (orthonormalized first).
    pub fn distance_to_span(&self, others: &[CMatrix<T>]) -> T {
        let target = crate::linalg::orthonormalize(&others.iter().map(vec).collect::<Vec<_>>(), T::lit(1e-12));
        subspace_distance(&self.vectors(), &target)
    }
}

fn identity_minus<T: Real>(l: &CMatrix<T>) -> CMatrix<T> {
    &CMatrix::identity(l.rows()) - l
}

fn to_basis<T: Real>(vectors: Vec<CVector<T>>, dim: usize, tol: T) -> Result<FixedSpaceBasis<T>> {
    let basis = vectors
        .iter()
        .map(|v| unvec(v, dim))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedSpaceBasis { basis, tol })
}

/// Orthonormal basis of `Ker(I − L)`; singular values of `I − L` below
/// `tol·max(1, σ_max(I − L))` count as zero.
pub fn fixed_space<T: Real>(l: &Superoperator<T>, tol: T) -> Result<FixedSpaceBasis<T>> {
    let kernel = null_space_scaled(&identity_minus(l.matrix()), tol, T::one())?;
    to_basis(kernel, l.dim(), tol)
}

/// Outcome of the finite-dimensional splitting `F(T) ⊕ Rng(I − T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingReport<T> {
    pub fixed_dim: usize,
    pub range_dim: usize,
    /// Smallest singular value of `[kernel basis | range basis]`.
    pub direct_sum_residual: T,
    /// Largest `|⟨g, y⟩|` for `g` in `Ker(I − L†)`, `y` in the range basis.
    pub annihilator_residual: T,
}

/// Check that `Ker(I − L)` and `Rng(I − L)` are complementary, and that the
/// fixed points of the dual annihilate the range.
///
/// Errors with [`Error::Splitting`] when the concatenated basis is rank
/// deficient (a defective eigenvalue 1).
pub fn splitting_check<T: Real>(l: &Superoperator<T>, tol: T) -> Result<SplittingReport<T>> {
    let n = l.matrix().rows();
    let m = identity_minus(l.matrix());
    let s = svd(&m)?;
    let threshold = tol * s.max().max(T::one());
    let mut kernel = Vec::new();
    let mut range = Vec::new();
    for (j, &sv) in s.singular_values.iter().enumerate() {
        if sv < threshold {
            kernel.push(s.v.column(j));
        } else {
            range.push(s.u.column(j));
        }
    }

    let mut all = kernel.clone();
    all.extend(range.iter().cloned());
    let direct_sum_residual = if all.is_empty() {
        T::zero()
    } else {
        svd(&CMatrix::from_columns(&all))?.min()
    };

    let dual_kernel = null_space_scaled(&m.adjoint(), tol, T::one())?;
    let annihilator_residual = dual_kernel
        .iter()
        .flat_map(|g| range.iter().map(move |y| dot(g, y).norm()))
        .fold(T::zero(), T::max);

    let report = SplittingReport {
        fixed_dim: kernel.len(),
        range_dim: range.len(),
        direct_sum_residual,
        annihilator_residual,
    };
    if report.fixed_dim + report.range_dim != n || direct_sum_residual < tol {
        return Err(Error::Splitting {
            residual: direct_sum_residual.as_f64(),
        });
    }
    Ok(report)
}

/// Fixed space of a convex combination versus the intersection of the
/// individual fixed spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionReport<T> {
    pub combined_fixed: FixedSpaceBasis<T>,
    pub intersection: FixedSpaceBasis<T>,
    /// `None` when the maps do not commute: the equality is only claimed for
    /// commuting families.
    pub equal: Option<bool>,
    pub subspace_residual: T,
    /// `max_{i,j} ‖L_i L_j − L_j L_i‖_F`.
    pub commute_residual: T,
}

pub fn fixed_space_intersection<T: Real>(
    channels: &[KrausChannel<T>],
    weights: &[T],
    tol: T,
) -> Result<IntersectionReport<T>> {
    if channels.is_empty() || channels.len() != weights.len() {
        return Err(Error::Domain(format!(
            "{} channels with {} weights",
            channels.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| w <= T::zero()) {
        return Err(Error::Domain("weights must be strictly positive".into()));
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if (total - T::one()).abs() > T::lit(1e-12) {
        return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
    }
    let dim = channels[0].dim();
    if channels.iter().any(|c| c.dim() != dim) {
        return Err(Error::Dimension("channels act on different dimensions".into()));
    }

    let ls: Vec<CMatrix<T>> = channels
        .iter()
        .map(|c| c.superoperator(Side::Forward).matrix().clone())
        .collect();
    let n = dim * dim;
    let combined = ls
        .iter()
        .zip(weights)
        .fold(CMatrix::zeros(n, n), |acc, (l, &w)| &acc + &l.scale_real(w));
    let combined = Superoperator::from_matrix(dim, Side::Forward, combined)?;
    let combined_fixed = fixed_space(&combined, tol)?;

    let stacked = ls
        .iter()
        .map(identity_minus)
        .reduce(|acc, m| acc.vstack(&m))
        .expect("nonempty");
    let intersection = to_basis(null_space_scaled(&stacked, tol, T::one())?, dim, tol)?;

    let mut commute_residual = T::zero();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let c = &(&ls[i] * &ls[j]) - &(&ls[j] * &ls[i]);
            commute_residual = commute_residual.max(c.frobenius());
        }
    }
    let subspace_residual = subspace_distance(&combined_fixed.vectors(), &intersection.vectors());
    let equal = (commute_residual <= tol).then_some(subspace_residual <= tol);
    Ok(IntersectionReport {
        combined_fixed,
        intersection,
        equal,
        subspace_residual,
        commute_residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HsSymmetryReport<T> {
    pub forward: FixedSpaceBasis<T>,
    pub adjoint: FixedSpaceBasis<T>,
    pub residual: T,
    pub equal: bool,
}

/// Compare `F(φ₂)` with `F(φ₂*)` on the Hilbert–Schmidt space.
pub fn hs_fixed_point_symmetry<T: Real>(ch: &KrausChannel<T>, tol: T) -> Result<HsSymmetryReport<T>> {
    let forward = fixed_space(&ch.superoperator(Side::Forward), tol)?;
    let adjoint = fixed_space(&ch.superoperator(Side::Adjoint), tol)?;
    let residual = if forward.is_empty() && adjoint.is_empty() {
        T::zero()
    } else {
        subspace_distance(&forward.vectors(), &adjoint.vectors())
    };
    Ok(HsSymmetryReport {
        equal: residual <= tol,
        forward,
        adjoint,
        residual,
    })
}
