//! Numerics for iterates of quantum operations.
//!
//! A quantum operation is given by a finite Kraus family `{V_i}` acting as
//! `φ(X) = Σ V_i X V_i†` with Heisenberg dual `φ*(A) = Σ V_i† A V_i`. The
//! crate verifies the channel axioms, computes fixed spaces and the
//! peripheral (unit-modulus) spectrum, and splits the iterates as
//!
//! ```text
//! φⁿ(X) = Σ_λ λⁿ P_λ(X) + Sⁿ(X)
//! ```
//!
//! with spectral projectors `P_λ` (cross-checked against Cesàro averages) and
//! a stable part `S` whose powers decay geometrically.
//!
//! Everything is generic over the real scalar ([`Real`]: `f32` or `f64`);
//! the aliases below fix `f64`, which is what the default tolerances are
//! calibrated for. Exact rational arithmetic ([`Exact`]) is used where
//! floating point cannot resolve an identity, see
//! [`catalog::f_recursion`].
//!
//! Vectorization is column-stacking everywhere, so `X ↦ V X W†` has the
//! superoperator `conj(W) ⊗ V`.

pub mod catalog;
pub mod channel;
pub mod ergodic;
mod error;
pub mod linalg;
pub mod random;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub use channel::{KrausChannel, Side, Superoperator, VerificationReport};
pub use ergodic::{DecayFit, DecompositionOptions, FixedSpaceBasis, PeripheralDecomposition};
pub use linalg::{CMatrix, CVector};

/// Double-precision complex scalar.
pub type Complex64 = num_complex::Complex<f64>;
/// Double-precision complex matrix.
pub type Matrix = CMatrix<f64>;
/// Single-precision complex matrix.
pub type Matrix32 = CMatrix<f32>;
pub type Channel = KrausChannel<f64>;
pub type Channel32 = KrausChannel<f32>;
pub type Superop = Superoperator<f64>;
pub type Decomposition = PeripheralDecomposition<f64>;
pub type Verification = VerificationReport<f64>;
pub type FixedSpace = FixedSpaceBasis<f64>;
pub type Decay = DecayFit<f64>;
/// Arbitrary-precision rational.
pub type Exact = num_rational::BigRational;
