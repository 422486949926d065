//! Seeded random matrices and channels for sampling-based checks.
//!
//! All sampling goes through `ChaCha8Rng`, whose output stream is fixed
//! across platforms and crate versions, so seeded reports are reproducible.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::KrausChannel;
use crate::linalg::{eigh, CMatrix};
use crate::scalar::{c, Real};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_e460;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn matrix<T: Real, R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(T::lit(rng.gen_range(-1.0..=1.0)), T::lit(rng.gen_range(-1.0..=1.0)))
    })
}

/// Random Hermitian matrix.
pub fn hermitian<T: Real, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    matrix::<T, R>(rng, d, d).hermitian_part()
}

/// Random density matrix `G G† / Tr{G G†}`.
pub fn density<T: Real, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    let g = matrix::<T, R>(rng, d, d);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    gg.scale_real(T::one() / tr)
}

/// Trace-preserving channel with `k` Kraus operators: random `G_i`
/// normalized by `(Σ G_i† G_i)^{-1/2}`.
pub fn channel<T: Real, R: Rng>(rng: &mut R, d: usize, k: usize) -> KrausChannel<T> {
    let gs: Vec<CMatrix<T>> = (0..k).map(|_| matrix(rng, d, d)).collect();
    let sum = gs
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, g| &acc + &(&g.adjoint() * g));
    let e = eigh(&sum).expect("hermitian eigensolver");
    let inv_sqrt = CMatrix::diag(
        &e.values
            .iter()
            .map(|&v| c(T::one() / v.sqrt()))
            .collect::<Vec<_>>(),
    );
    let norm = &(&e.vectors * &inv_sqrt) * &e.vectors.adjoint();
    let kraus = gs.iter().map(|g| g * &norm).collect();
    KrausChannel::new("random", kraus).expect("consistent random Kraus family")
}

/// Unitary from the QR-like orthonormalization of a random matrix.
pub fn unitary<T: Real, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    let cols = crate::linalg::orthonormalize(&matrix::<T, R>(rng, d, d).columns(), T::lit(1e-6));
    CMatrix::from_columns(&cols)
}
