//! Dense complex linear algebra used throughout the crate.

mod eig;
mod matrix;
mod ops;
mod svd;

pub use eig::{eig_general, eigen_order, eigenvalues, schur, sort_eigenvalues, spectral_radius, Eigen};
pub use matrix::{dot, vnorm, CMatrix, CVector};
pub use ops::{
    gram, hs_inner, hs_norm, kron, null_space, null_space_scaled, operator_norm, orthonormality_defect, orthonormalize,
    projection_residual, range_space, smallest_singular_subspace, subspace_distance, trace_norm, unvec,
    vec,
};
pub use svd::{eigh, inverse, svd, HermitianEigen, Svd};
