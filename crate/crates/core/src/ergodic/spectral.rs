//! Peripheral spectrum, spectral projectors, the stable part and the
//! decomposition of iterates `Lⁿ = Σ_λ λⁿ P_λ + Sⁿ`.

use super::cesaro::{cesaro_average, power_sum};
use crate::channel::{Side, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{
    eigen_order, eigenvalues, inverse, operator_norm, range_space, smallest_singular_subspace, svd, unvec,
    vec, CMatrix,
};
use crate::scalar::{c, Real, C};

/// Tolerances and switches for [`decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionOptions<T> {
    /// Eigenvalues with `|λ| ≥ 1 − peripheral_tol` are peripheral.
    pub peripheral_tol: T,
    /// Peripheral eigenvalues closer than this are one cluster.
    pub cluster_tol: T,
    /// Upper bound on the condition number of the biorthogonal eigenbasis
    /// pairing of any cluster.
    pub max_condition: T,
    /// Bound on the projector-algebra residuals, relative to `max(1, ‖L‖)`.
    pub algebra_tol: T,
    /// Terms in the Cesàro cross-check; 0 skips it.
    pub cesaro_n: usize,
    /// Round-off allowance added to the Cesàro bound.
    pub cesaro_floor: T,
}

impl<T: Real> Default for DecompositionOptions<T> {
    fn default() -> Self {
        Self {
            peripheral_tol: T::lit(1e-8),
            cluster_tol: T::lit(1e-7),
            max_condition: T::lit(1e8),
            algebra_tol: T::lit(1e-8),
            cesaro_n: 10_000,
            cesaro_floor: T::lit(1e-9),
        }
    }
}

/// A peripheral eigenvalue (radially projected onto the unit circle) and
/// the number of eigenvalues of `L` merged into it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeripheralCluster<T> {
    pub lambda: C<T>,
    pub multiplicity: usize,
}

/// `P_λ` together with its rank and the conditioning of its construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProjector<T> {
    pub lambda: C<T>,
    pub matrix: CMatrix<T>,
    pub rank: usize,
    /// Condition number of `W†R`, the pairing of left and right eigenbases.
    pub condition: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeripheralDecomposition<T> {
    pub dim: usize,
    pub side: Side,
    pub lambdas: Vec<C<T>>,
    pub projectors: Vec<CMatrix<T>>,
    pub ranks: Vec<usize>,
    pub stable: CMatrix<T>,
    pub stable_radius: T,
    pub peripheral_tol: T,
    pub cluster_tol: T,
    /// Worst projector construction condition number (1 when no clusters).
    pub eigvec_condition: T,
    /// `‖A_n(L/λ) − P_λ‖` per λ, empty when the cross-check was skipped.
    pub cesaro_residuals: Vec<T>,
    /// Upper bounds the Cesàro residuals were tested against.
    pub cesaro_bounds: Vec<T>,
    pub algebra: ProjectorAlgebraResiduals<T>,
}

impl<T: Real> PeripheralDecomposition<T> {
    /// `1 − ρ(S)`.
    pub fn spectral_gap(&self) -> T {
        T::one() - self.stable_radius
    }

    /// `Σ_λ P_λ`.
    pub fn peripheral_projector(&self) -> CMatrix<T> {
        let n = self.stable.rows();
        self.projectors.iter().fold(CMatrix::zeros(n, n), |acc, p| &acc + p)
    }

    /// `Σ_λ λ P_λ + S`, which equals `L` up to round-off.
    pub fn recompose(&self) -> CMatrix<T> {
        self.lambdas
            .iter()
            .zip(&self.projectors)
            .fold(self.stable.clone(), |acc, (&l, p)| &acc + &p.scale(l))
    }
}

/// Largest residuals of the projector identities, in operator norm.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProjectorAlgebraResiduals<T> {
    /// `‖P_λ² − P_λ‖`
    pub idempotence: T,
    /// `‖P_λ P_μ‖`, `λ ≠ μ`
    pub orthogonality: T,
    /// `‖L P_λ − λ P_λ‖`
    pub left_eigen: T,
    /// `‖P_λ L − λ P_λ‖`
    pub right_eigen: T,
    /// `max(‖P_λ S‖, ‖S P_λ‖)`
    pub stable_annihilation: T,
}

impl<T: Real> ProjectorAlgebraResiduals<T> {
    pub fn max(&self) -> T {
        self.idempotence
            .max(self.orthogonality)
            .max(self.left_eigen)
            .max(self.right_eigen)
            .max(self.stable_annihilation)
    }
}

/// Cluster the eigenvalues of `L` with modulus at least `1 − peripheral_tol`.
///
/// Clusters are merged to their mean and projected radially onto the unit
/// circle; the result follows the crate-wide eigenvalue order.
pub fn peripheral_clusters<T: Real>(
    values: &[C<T>],
    peripheral_tol: T,
    cluster_tol: T,
) -> Vec<PeripheralCluster<T>> {
    let mut groups: Vec<Vec<C<T>>> = Vec::new();
    for &z in values.iter().filter(|z| z.norm() >= T::one() - peripheral_tol) {
        match groups.iter_mut().find(|g| (g[0] - z).norm() <= cluster_tol) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let clusters: Vec<PeripheralCluster<T>> = groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().fold(c(T::zero()), |a, z| a + z) / T::from_count(g.len());
            PeripheralCluster {
                lambda: mean / mean.norm(),
                multiplicity: g.len(),
            }
        })
        .collect();
    let order = eigen_order(&clusters.iter().map(|c| c.lambda).collect::<Vec<_>>());
    order.into_iter().map(|i| clusters[i]).collect()
}

/// Peripheral spectrum of `L`, clustered and projected onto `|λ| = 1`.
pub fn peripheral_spectrum<T: Real>(
    l: &Superoperator<T>,
    peripheral_tol: T,
    cluster_tol: T,
) -> Result<Vec<PeripheralCluster<T>>> {
    Ok(peripheral_clusters(&eigenvalues(l.matrix())?, peripheral_tol, cluster_tol))
}

/// Spectral projector onto each cluster's eigenspace along the complementary
/// invariant subspace.
///
/// With `R` an orthonormal basis of `Ker(L − λ)` and `W` one of
/// `Ker(L† − conj λ)`, the projector is `R (W†R)⁻¹ W†`: the rows of the
/// inverse eigenvector matrix restricted to the cluster. A cluster whose
/// eigenspace is smaller than its multiplicity (a Jordan block) or whose
/// pairing `W†R` is ill-conditioned is reported as
/// [`Error::IllConditioned`].
pub fn spectral_projectors<T: Real>(
    l: &Superoperator<T>,
    clusters: &[PeripheralCluster<T>],
    opts: &DecompositionOptions<T>,
) -> Result<Vec<SpectralProjector<T>>> {
    let m = l.matrix();
    let n = m.rows();
    let scale = T::one().max(m.frobenius());
    clusters
        .iter()
        .map(|cl| {
            let shifted = m - &CMatrix::identity(n).scale(cl.lambda);
            let (right, worst_r) = smallest_singular_subspace(&shifted, cl.multiplicity)?;
            let (left, worst_l) = smallest_singular_subspace(&shifted.adjoint(), cl.multiplicity)?;
            let worst = worst_r.max(worst_l);
            if worst > opts.cluster_tol * scale {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                    detail: format!(
                        "eigenvalue {} has multiplicity {} but eigenspace residual {:e}",
                        cl.lambda, cl.multiplicity, worst
                    ),
                });
            }
            let r = CMatrix::from_columns(&right);
            let w = CMatrix::from_columns(&left);
            let pairing = &w.adjoint() * &r;
            let s = svd(&pairing)?;
            let condition = if s.min() == T::zero() {
                T::infinity()
            } else {
                s.max() / s.min()
            };
            // Negated so that a NaN condition number is rejected.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(condition <= opts.max_condition) {
                return Err(Error::IllConditioned {
                    condition: condition.as_f64(),
                    detail: format!("eigenvalue {}", cl.lambda),
                });
            }
            let matrix = &(&r * &inverse(&pairing)?) * &w.adjoint();
            Ok(SpectralProjector {
                lambda: cl.lambda,
                matrix,
                rank: cl.multiplicity,
                condition,
            })
        })
        .collect()
}

/// `S = L − Σ_λ λ P_λ` and its spectral radius.
///
/// Errors with [`Error::Decomposition`] when `ρ(S) ≥ 1 − peripheral_tol`,
/// meaning part of the peripheral spectrum was not captured.
pub fn stable_part<T: Real>(
    l: &Superoperator<T>,
    projectors: &[SpectralProjector<T>],
    peripheral_tol: T,
) -> Result<(CMatrix<T>, T)> {
    let s = projectors
        .iter()
        .fold(l.matrix().clone(), |acc, p| &acc - &p.matrix.scale(p.lambda));
    let radius = eigenvalues(&s)?.first().map_or_else(T::zero, |z| z.norm());
    if radius >= T::one() - peripheral_tol {
        return Err(Error::Decomposition(format!(
            "stable part has spectral radius {radius}; loosen the peripheral tolerance"
        )));
    }
    Ok((s, radius))
}

pub fn projector_algebra_residuals<T: Real>(
    l: &CMatrix<T>,
    projectors: &[SpectralProjector<T>],
    stable: &CMatrix<T>,
) -> Result<ProjectorAlgebraResiduals<T>> {
    let mut r = ProjectorAlgebraResiduals {
        idempotence: T::zero(),
        orthogonality: T::zero(),
        left_eigen: T::zero(),
        right_eigen: T::zero(),
        stable_annihilation: T::zero(),
    };
    for (i, p) in projectors.iter().enumerate() {
        let pm = &p.matrix;
        let lp = pm.scale(p.lambda);
        r.idempotence = r.idempotence.max(operator_norm(&(&(pm * pm) - pm))?);
        r.left_eigen = r.left_eigen.max(operator_norm(&(&(l * pm) - &lp))?);
        r.right_eigen = r.right_eigen.max(operator_norm(&(&(pm * l) - &lp))?);
        r.stable_annihilation = r
            .stable_annihilation
            .max(operator_norm(&(pm * stable))?)
            .max(operator_norm(&(stable * pm))?);
        for q in &projectors[i + 1..] {
            r.orthogonality = r
                .orthogonality
                .max(operator_norm(&(pm * &q.matrix))?)
                .max(operator_norm(&(&q.matrix * pm))?);
        }
    }
    Ok(r)
}

/// Rigorous bound on `‖A_n(L/λ) − P_λ‖`.
///
/// `A_n(L/λ) − P_λ = n⁻¹[Σ_{μ≠λ} (Σ_i (μ/λ)ⁱ) P_μ + Σ_i (S/λ)ⁱ]` and
/// `|Σ_i (μ/λ)ⁱ| ≤ 2/|λ − μ|` on the unit circle.
fn cesaro_bound<T: Real>(
    index: usize,
    projectors: &[SpectralProjector<T>],
    stable: &CMatrix<T>,
    n: usize,
) -> Result<T> {
    let lambda = projectors[index].lambda;
    let mut total = T::zero();
    for (j, p) in projectors.iter().enumerate() {
        if j != index {
            total += operator_norm(&p.matrix)? * T::lit(2.0) / (lambda - p.lambda).norm();
        }
    }
    total += operator_norm(&power_sum(&stable.scale(lambda.inv()), n))?;
    Ok(total / T::from_count(n))
}

/// Full peripheral decomposition of `L`, validated.
///
/// The spectral projectors are checked against the projector identities and,
/// unless `cesaro_n == 0`, against the Cesàro averages `A_n(L/λ)`; any
/// disagreement is an error.
pub fn decompose<T: Real>(
    l: &Superoperator<T>,
    opts: &DecompositionOptions<T>,
) -> Result<PeripheralDecomposition<T>> {
    let clusters = peripheral_spectrum(l, opts.peripheral_tol, opts.cluster_tol)?;
    let projectors = spectral_projectors(l, &clusters, opts)?;
    let (stable, stable_radius) = stable_part(l, &projectors, opts.peripheral_tol)?;

    let m = l.matrix();
    let scale = T::one().max(operator_norm(m)?);
    let algebra = projector_algebra_residuals(m, &projectors, &stable)?;
    if algebra.max() > opts.algebra_tol * scale {
        return Err(Error::Decomposition(format!(
            "projector algebra residual {:e} exceeds {:e}",
            algebra.max(),
            opts.algebra_tol * scale
        )));
    }

    let mut cesaro_residuals = Vec::new();
    let mut cesaro_bounds = Vec::new();
    if opts.cesaro_n > 0 {
        for (i, p) in projectors.iter().enumerate() {
            let avg = cesaro_average(l, p.lambda, opts.cesaro_n)?;
            let residual = operator_norm(&(&avg - &p.matrix))?;
            let bound = T::lit(2.0) * cesaro_bound(i, &projectors, &stable, opts.cesaro_n)? + opts.cesaro_floor;
            if residual > bound {
                return Err(Error::Decomposition(format!(
                    "Cesàro average for eigenvalue {} deviates by {residual:e} (bound {bound:e})",
                    p.lambda
                )));
            }
            cesaro_residuals.push(residual);
            cesaro_bounds.push(bound);
        }
    }

    Ok(PeripheralDecomposition {
        dim: l.dim(),
        side: l.side(),
        lambdas: projectors.iter().map(|p| p.lambda).collect(),
        ranks: projectors.iter().map(|p| p.rank).collect(),
        eigvec_condition: projectors.iter().fold(T::one(), |a, p| a.max(p.condition)),
        projectors: projectors.into_iter().map(|p| p.matrix).collect(),
        stable,
        stable_radius,
        peripheral_tol: opts.peripheral_tol,
        cluster_tol: opts.cluster_tol,
        cesaro_residuals,
        cesaro_bounds,
        algebra,
    })
}

/// `Σ_λ λⁿ P_λ(X) + Sⁿ(X)`.
pub fn reconstruct_iterate<T: Real>(
    decomp: &PeripheralDecomposition<T>,
    n: usize,
    x: &CMatrix<T>,
) -> Result<CMatrix<T>> {
    if n == 0 {
        return Err(Error::Domain("iterate index must be >= 1".into()));
    }
    let d = decomp.dim;
    if x.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "decomposition acts on {d}x{d} matrices, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let v = vec(x);
    let mut out = v.clone();
    for _ in 0..n {
        out = decomp.stable.mul_vec(&out);
    }
    for (&lambda, p) in decomp.lambdas.iter().zip(&decomp.projectors) {
        let ln = lambda.powu(n as u32);
        for (o, z) in out.iter_mut().zip(p.mul_vec(&v)) {
            *o += ln * z;
        }
    }
    unvec(&out, d)
}

/// `max_k |σ_k − 1|` for `L` restricted to the span of all peripheral
/// eigenvectors, in an orthonormal basis of that span.
///
/// The span of `∪_λ F(L/λ)` is used since the union itself is not a
/// subspace.
pub fn peripheral_unitarity_check<T: Real>(
    l: &Superoperator<T>,
    decomp: &PeripheralDecomposition<T>,
) -> Result<T> {
    if decomp.projectors.is_empty() {
        return Err(Error::Degenerate("no peripheral eigenvalues".into()));
    }
    let basis = range_space(&decomp.peripheral_projector(), T::lit(1e-8))?;
    if basis.is_empty() {
        return Err(Error::Degenerate("peripheral span is empty".into()));
    }
    let q = CMatrix::from_columns(&basis);
    let restricted = &(&q.adjoint() * l.matrix()) * &q;
    Ok(svd(&restricted)?
        .singular_values
        .iter()
        .fold(T::zero(), |acc, &s| acc.max((s - T::one()).abs())))
}

/// Comparison of the spectra of `L` and `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExclusivityReport<T> {
    /// Eigenvalues of `S` with modulus `≥ 1 − peripheral_tol`.
    pub stable_peripheral_count: usize,
    /// Largest distance from a non-peripheral eigenvalue of `L` to its
    /// matched eigenvalue of `S` (greedy one-to-one matching).
    pub max_mismatch: T,
}

pub fn eigenvalue_exclusivity<T: Real>(
    l: &Superoperator<T>,
    decomp: &PeripheralDecomposition<T>,
) -> Result<ExclusivityReport<T>> {
    let cut = T::one() - decomp.peripheral_tol;
    let s_vals = eigenvalues(&decomp.stable)?;
    let stable_peripheral_count = s_vals.iter().filter(|z| z.norm() >= cut).count();
    let mut pool: Vec<Option<C<T>>> = s_vals.into_iter().map(Some).collect();
    let mut max_mismatch = T::zero();
    for mu in eigenvalues(l.matrix())?.into_iter().filter(|z| z.norm() < cut) {
        let best = pool
            .iter()
            .enumerate()
            .filter_map(|(i, z)| z.map(|z| (i, (z - mu).norm())))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((i, dist)) => {
                pool[i] = None;
                max_mismatch = max_mismatch.max(dist);
            }
            None => max_mismatch = T::infinity(),
        }
    }
    Ok(ExclusivityReport {
        stable_peripheral_count,
        max_mismatch,
    })
}

/// Eigenvalues of `S` after removing the `Σ rank(P_λ)` values annihilated by
/// the projectors (those closest to zero).
pub fn stable_eigenvalues<T: Real>(decomp: &PeripheralDecomposition<T>) -> Result<Vec<C<T>>> {
    let mut vals = eigenvalues(&decomp.stable)?;
    let drop: usize = decomp.ranks.iter().sum();
    vals.truncate(vals.len().saturating_sub(drop));
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use crate::channel::KrausChannel;

    #[test]
    fn identity_channel_decomposition() {
        let l = KrausChannel::<f64>::identity(2).superoperator(Side::Forward);
        let d = decompose(&l, &DecompositionOptions::default()).unwrap();
        assert_eq!(d.lambdas.len(), 1);
        assert!((d.lambdas[0] - c(1.0)).norm() < 1e-15);
        assert_eq!(d.ranks, vec![4]);
        assert!(d.projectors[0].max_abs_diff(&CMatrix::identity(4)) < 1e-14);
        assert!(d.stable.max_abs() < 1e-14);
        assert!(peripheral_unitarity_check(&l, &d).unwrap() < 1e-14);
    }

    #[test]
    fn clustering_merges_and_projects() {
        let vals = vec![
            c(1.0 + 3e-9),
            c(1.0 - 2e-9),
            Complex::new(-1.0, 1e-12),
            c(0.5),
        ];
        let cl = peripheral_clusters(&vals, 1e-8, 1e-7);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].multiplicity, 2);
        assert!((cl[0].lambda - c(1.0)).norm() < 1e-15);
        assert!((cl[1].lambda.norm() - 1.0f64).abs() < 1e-15);
        assert!(peripheral_clusters(&[c(0.99)], 1e-8, 1e-7).is_empty());
    }

    #[test]
    fn jordan_block_on_circle_is_rejected() {
        let m = CMatrix::<f64>::from_real(4, 4, &[
            1.0, 1.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.5, 0.0, //
            0.0, 0.0, 0.0, 0.2,
        ])
        .unwrap();
        let l = Superoperator::from_matrix(2, Side::Forward, m).unwrap();
        let err = decompose(&l, &DecompositionOptions::default()).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }), "{err:?}");
    }

    #[test]
    fn reconstruct_rejects_bad_input() {
        let l = KrausChannel::<f64>::identity(2).superoperator(Side::Forward);
        let d = decompose(&l, &DecompositionOptions::default()).unwrap();
        assert!(matches!(reconstruct_iterate(&d, 0, &CMatrix::identity(2)), Err(Error::Domain(_))));
        assert!(matches!(reconstruct_iterate(&d, 1, &CMatrix::identity(3)), Err(Error::Dimension(_))));
    }
}
