//! Mean-ergodic analysis of a superoperator: Cesàro means, fixed spaces,
//! the peripheral spectrum and the decomposition of iterates.

mod cesaro;
mod decay;
mod fixed;
mod spectral;

pub use cesaro::{cesaro_average, power_sum};
pub use decay::{decay_fit, DecayFit, DECAY_MARGIN};
pub use fixed::{
    fixed_space, fixed_space_intersection, hs_fixed_point_symmetry, splitting_check, FixedSpaceBasis,
    HsSymmetryReport, IntersectionReport, SplittingReport,
};
pub use spectral::{
    decompose, eigenvalue_exclusivity, peripheral_clusters, peripheral_spectrum, peripheral_unitarity_check,
    projector_algebra_residuals, reconstruct_iterate, spectral_projectors, stable_eigenvalues, stable_part,
    DecompositionOptions, ExclusivityReport, PeripheralCluster, PeripheralDecomposition,
    ProjectorAlgebraResiduals, SpectralProjector,
};
