//! Kraus-form quantum operations, their superoperators and axiom checks.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, operator_norm, trace_norm, unvec, vec, CMatrix};
use crate::random;
use crate::scalar::{Real, C};

/// A finite Kraus family `{V_i}` on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    label: String,
    dim: usize,
    kraus: Vec<CMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(label: impl Into<String>, kraus: Vec<CMatrix<T>>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Dimension("empty Kraus family".into()))?;
        let dim = first.rows();
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (dim, dim) {
                return Err(Error::Dimension(format!(
                    "Kraus operator {i} is {}x{}, expected {dim}x{dim}",
                    k.rows(),
                    k.cols()
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            dim,
            kraus,
        })
    }

    /// `X ↦ X` on `dim` dimensions.
    pub fn identity(dim: usize) -> Self {
        Self::unitary("identity", CMatrix::identity(dim)).expect("square identity")
    }

    /// `X ↦ U X U†`.
    pub fn unitary(label: impl Into<String>, u: CMatrix<T>) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::Dimension("unitary must be square".into()));
        }
        Self::new(label, vec![u])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    fn check_dim(&self, x: &CMatrix<T>) -> Result<()> {
        if x.shape() != (self.dim, self.dim) {
            return Err(Error::Dimension(format!(
                "channel acts on {d}x{d} matrices, got {}x{}",
                x.rows(),
                x.cols(),
                d = self.dim
            )));
        }
        Ok(())
    }

    /// `φ(X) = Σ V_i X V_i†`.
    pub fn apply(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_dim(x)?;
        Ok(self.kraus.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, v| {
            &acc + &(&(v * x) * &v.adjoint())
        }))
    }

    /// `φ*(A) = Σ V_i† A V_i`.
    pub fn apply_adjoint(&self, a: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_dim(a)?;
        Ok(self.kraus.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, v| {
            &acc + &(&(&v.adjoint() * a) * v)
        }))
    }

    /// `φⁿ(X)` (or `φ*ⁿ` for [`Side::Adjoint`]) by repeated application.
    pub fn iterate(&self, side: Side, x: &CMatrix<T>, n: usize) -> Result<CMatrix<T>> {
        let mut out = x.clone();
        for _ in 0..n {
            out = match side {
                Side::Forward => self.apply(&out)?,
                Side::Adjoint => self.apply_adjoint(&out)?,
            };
        }
        Ok(out)
    }

    /// `Σ V_i† V_i`, symmetrized.
    pub fn kraus_sum(&self) -> CMatrix<T> {
        self.kraus
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, v| &acc + &(&v.adjoint() * v))
            .hermitian_part()
    }

    /// Choi matrix `Σ_ij E_ij ⊗ φ(E_ij)`, which equals `Σ vec(V_i) vec(V_i)†`.
    pub fn choi(&self) -> CMatrix<T> {
        let n = self.dim * self.dim;
        self.kraus.iter().fold(CMatrix::zeros(n, n), |acc, v| {
            let w = vec(v);
            &acc + &CMatrix::outer(&w, &w)
        })
    }

    /// Matrix of `φ` (`Σ conj(V_i) ⊗ V_i`) or of `φ*` (`Σ V_iᵀ ⊗ V_i†`).
    pub fn superoperator(&self, side: Side) -> Superoperator<T> {
        let n = self.dim * self.dim;
        let matrix = self.kraus.iter().fold(CMatrix::zeros(n, n), |acc, v| {
            let term = match side {
                Side::Forward => kron(&v.conj(), v),
                Side::Adjoint => kron(&v.transpose(), &v.adjoint()),
            };
            &acc + &term
        });
        Superoperator {
            dim: self.dim,
            side,
            matrix,
        }
    }

    /// Check complete positivity, the trace condition, trace-norm / operator-norm
    /// contraction and φ/φ* duality.
    ///
    /// Contraction and duality are sampled on `opts.samples` seeded random
    /// matrices, each `X` normalized to `‖X‖₁ = 1` and each `A` to `‖A‖ = 1`.
    pub fn verify(&self, opts: &VerifyOptions<T>) -> Result<VerificationReport<T>> {
        let tol = opts.tol;
        let min_choi_eigenvalue = eigh(&self.choi())?.values[0];
        let max_kraus_sum_eigenvalue = *eigh(&self.kraus_sum())?.values.last().unwrap();

        let mut rng = random::rng(opts.seed);
        let mut trace_norm_ratio = T::zero();
        let mut operator_norm_ratio = T::zero();
        let mut duality_max_residual = T::zero();
        for _ in 0..opts.samples {
            let x = random::matrix::<T, _>(&mut rng, self.dim, self.dim);
            let x = x.scale_real(T::one() / trace_norm(&x)?);
            let a = random::matrix::<T, _>(&mut rng, self.dim, self.dim);
            let a = a.scale_real(T::one() / operator_norm(&a)?);

            let fx = self.apply(&x)?;
            let fa = self.apply_adjoint(&a)?;
            trace_norm_ratio = trace_norm_ratio.max(trace_norm(&fx)?);
            operator_norm_ratio = operator_norm_ratio.max(operator_norm(&fa)?);
            let lhs: C<T> = (&fx * &a).trace();
            let rhs: C<T> = (&x * &fa).trace();
            duality_max_residual = duality_max_residual.max((lhs - rhs).norm());
        }

        let bound = T::one() + tol;
        Ok(VerificationReport {
            cp_ok: min_choi_eigenvalue >= -tol,
            min_choi_eigenvalue,
            trace_nonincreasing_ok: max_kraus_sum_eigenvalue <= bound,
            max_kraus_sum_eigenvalue,
            contraction_ok: trace_norm_ratio <= bound && operator_norm_ratio <= bound,
            trace_norm_ratio,
            operator_norm_ratio,
            duality_max_residual,
            tol,
            seed: opts.seed,
            samples: opts.samples,
        })
    }

    /// `‖Σ V_i†V_i − I‖_max ≤ tol`.
    pub fn is_trace_preserving(&self, tol: T) -> bool {
        self.kraus_sum().max_abs_diff(&CMatrix::identity(self.dim)) <= tol
    }

    /// `‖φ(I) − I‖_max ≤ tol`.
    pub fn is_unital(&self, tol: T) -> bool {
        let id = CMatrix::identity(self.dim);
        self.apply(&id).expect("matching dims").max_abs_diff(&id) <= tol
    }
}

/// Which of φ (Schrödinger picture) or φ* (Heisenberg picture) a matrix represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Forward,
    Adjoint,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Forward => Side::Adjoint,
            Side::Adjoint => Side::Forward,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Forward => "forward",
            Side::Adjoint => "adjoint",
        })
    }
}

/// `d²×d²` matrix `L` with `vec(φ(X)) = L vec(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T> {
    dim: usize,
    side: Side,
    matrix: CMatrix<T>,
}

impl<T: Real> Superoperator<T> {
    /// Wrap a raw `d²×d²` matrix; used for maps that have no Kraus form.
    pub fn from_matrix(dim: usize, side: Side, matrix: CMatrix<T>) -> Result<Self> {
        if dim == 0 || matrix.shape() != (dim * dim, dim * dim) {
            return Err(Error::Dimension(format!(
                "superoperator on {dim}x{dim} matrices must be {n}x{n}, got {}x{}",
                matrix.rows(),
                matrix.cols(),
                n = dim * dim
            )));
        }
        Ok(Self { dim, side, matrix })
    }

    /// The transpose map `X ↦ Xᵀ`: positive but not completely positive.
    pub fn transpose_map(dim: usize) -> Self {
        let n = dim * dim;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..dim {
            for j in 0..dim {
                // E_ij (at j·d + i) ↦ E_ji (at i·d + j)
                m[(i * dim + j, j * dim + i)] = crate::scalar::cone();
            }
        }
        Self {
            dim,
            side: Side::Forward,
            matrix: m,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn apply(&self, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        if x.shape() != (self.dim, self.dim) {
            return Err(Error::Dimension(format!(
                "superoperator acts on {d}x{d} matrices, got {}x{}",
                x.rows(),
                x.cols(),
                d = self.dim
            )));
        }
        unvec(&self.matrix.mul_vec(&vec(x)), self.dim)
    }

    /// The HS-dual map: matrix `L†`, opposite side.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            side: self.side.flip(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)` of the represented map.
    pub fn choi(&self) -> CMatrix<T> {
        let d = self.dim;
        CMatrix::from_fn(d * d, d * d, |r, c| {
            let (i, k) = (r / d, r % d);
            let (j, l) = (c / d, c % d);
            self.matrix[(l * d + k, j * d + i)]
        })
    }

    /// Smallest eigenvalue of the (symmetrized) Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> Result<T> {
        Ok(eigh(&self.choi())?.values[0])
    }
}

/// Sampling and tolerance settings for [`KrausChannel::verify`].
#[derive(Clone, Debug)]
pub struct VerifyOptions<T> {
    pub tol: T,
    pub seed: u64,
    pub samples: usize,
}

impl<T: Real> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::default_tol(),
            seed: random::DEFAULT_SEED,
            samples: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport<T> {
    pub cp_ok: bool,
    pub min_choi_eigenvalue: T,
    pub trace_nonincreasing_ok: bool,
    pub max_kraus_sum_eigenvalue: T,
    pub contraction_ok: bool,
    /// Largest `‖φ(X)‖₁` over samples with `‖X‖₁ = 1`.
    pub trace_norm_ratio: T,
    /// Largest `‖φ*(A)‖` over samples with `‖A‖ = 1`.
    pub operator_norm_ratio: T,
    pub duality_max_residual: T,
    pub tol: T,
    pub seed: u64,
    pub samples: usize,
}

impl<T: Real> VerificationReport<T> {
    pub fn all_ok(&self) -> bool {
        self.cp_ok && self.trace_nonincreasing_ok && self.contraction_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use num_complex::Complex;

    fn pauli_xy(p: f64) -> KrausChannel<f64> {
        let i = Complex::new(0.0, 1.0);
        let sx = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sy = CMatrix::from_rows(vec![vec![c(0.0), -i], vec![i, c(0.0)]]).unwrap();
        KrausChannel::new("pxy", vec![sx.scale_real(p.sqrt()), sy.scale_real((1.0 - p).sqrt())]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let ch = pauli_xy(0.3);
        let id = CMatrix::identity(2);
        assert!(ch.apply(&id).unwrap().max_abs_diff(&id) < 1e-15);
        let flip = pauli_xy(1.0).apply(&CMatrix::diag(&[c(1.0), c(0.0)])).unwrap();
        assert_eq!(flip, CMatrix::diag(&[c(0.0), c(1.0)]));
        assert!(matches!(ch.apply(&CMatrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn empty_and_mismatched_families() {
        assert!(KrausChannel::<f64>::new("none", vec![]).is_err());
        let bad = vec![CMatrix::identity(2), CMatrix::identity(3)];
        assert!(KrausChannel::<f64>::new("bad", bad).is_err());
        let zero = KrausChannel::<f64>::new("zero", vec![CMatrix::zeros(3, 3)]).unwrap();
        assert_eq!(zero.kraus_sum(), CMatrix::zeros(3, 3));
    }

    #[test]
    fn identity_choi_is_twice_max_entangled_projector() {
        let e = eigh(&KrausChannel::<f64>::identity(2).choi()).unwrap();
        let expected = [0.0, 0.0, 0.0, 2.0];
        for (a, b) in e.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn transpose_map_is_not_cp() {
        let t = Superoperator::<f64>::transpose_map(2);
        let x = CMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(t.apply(&x).unwrap(), x.transpose());
        assert!((t.min_choi_eigenvalue().unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_identity_fails_trace_condition() {
        let ch = KrausChannel::new("sqrt2", vec![CMatrix::<f64>::identity(2).scale_real(2f64.sqrt())]).unwrap();
        let r = ch.verify(&VerifyOptions::default()).unwrap();
        assert!(!r.trace_nonincreasing_ok);
        assert!((r.max_kraus_sum_eigenvalue - 2.0).abs() < 1e-12);
        assert!(r.cp_ok);
        assert!(!r.all_ok());
    }

    #[test]
    fn superoperator_of_identity() {
        let l = KrausChannel::<f64>::identity(3).superoperator(Side::Forward);
        assert_eq!(l.matrix(), &CMatrix::identity(9));
    }

    #[test]
    fn adjoint_superoperator_is_matrix_adjoint() {
        let ch = pauli_xy(0.2);
        let f = ch.superoperator(Side::Forward);
        let a = ch.superoperator(Side::Adjoint);
        assert!(f.dual().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert_eq!(f.dual().side(), Side::Adjoint);
    }

    #[test]
    fn pauli_superoperator_is_real_symmetric() {
        let l = pauli_xy(0.37).superoperator(Side::Forward);
        let m = l.matrix();
        assert!(m.as_slice().iter().all(|z| z.im.abs() < 1e-15));
        assert!(m.max_abs_diff(&m.transpose()) < 1e-15);
    }
}
