//! Model channels with closed-form answers.
//!
//! * `pauli-xy(p)`: `V₁ = √p σ_x`, `V₂ = √(1−p) σ_y` on ℂ².
//! * `shift(p, dim)`: `V₁ = √p S_L`, `V₂ = √(1−p) S_R` on ℓ² cut to `dim`
//!   sites.
//! * `parity-fock(p, dim)`: `V₁ = √p I`, `V₂ = √(1−p) e^{−iπa†a}` on a Fock
//!   space cut at `dim − 1` quanta.
//!
//! Truncations are hard cutoffs at index `dim − 1`. The truncated right
//! shift drops the amplitude pushed past the cutoff, so the truncated
//! channels stay trace non-increasing, but their spectra carry boundary
//! effects that the infinite-dimensional models do not have.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{Num, One, Zero};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{kron, vec, CMatrix};
use crate::scalar::{c, czero, Real, C};

pub const PAULI_XY: &str = "pauli-xy";
pub const SHIFT: &str = "shift";
pub const PARITY_FOCK: &str = "parity-fock";

/// Names accepted by [`lookup`].
pub const ENTRY_NAMES: [&str; 3] = [PAULI_XY, SHIFT, PARITY_FOCK];

pub fn sigma_x<T: Real>() -> CMatrix<T> {
    CMatrix::from_fn(2, 2, |i, j| if i != j { c(T::one()) } else { czero() })
}

pub fn sigma_y<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = Complex::new(T::zero(), -T::one());
    m[(1, 0)] = Complex::new(T::zero(), T::one());
    m
}

pub fn sigma_z<T: Real>() -> CMatrix<T> {
    CMatrix::diag(&[c(T::one()), c(-T::one())])
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p must lie in (0, 1), got {p}")))
    }
}

fn check_truncation(d: usize) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("truncation dimension must be >= 2, got {d}")))
    }
}

pub fn pauli_xy_channel<T: Real>(p: f64) -> Result<KrausChannel<T>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
    }
    KrausChannel::new(
        format!("{PAULI_XY}(p={p})"),
        vec![
            sigma_x::<T>().scale_real(T::lit(p.sqrt())),
            sigma_y::<T>().scale_real(T::lit((1.0 - p).sqrt())),
        ],
    )
}

/// Truncated left shift: ones on the superdiagonal, `(S_L a)_k = a_{k+1}`.
pub fn left_shift<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::from_fn(d, d, |i, j| if j == i + 1 { c(T::one()) } else { czero() })
}

/// Truncated right shift: ones on the subdiagonal, `(S_R a)_k = a_{k−1}`.
pub fn right_shift<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::from_fn(d, d, |i, j| if i == j + 1 { c(T::one()) } else { czero() })
}

pub fn shift_channel<T: Real>(p: f64, d: usize) -> Result<KrausChannel<T>> {
    check_open_unit(p)?;
    check_truncation(d)?;
    KrausChannel::new(
        format!("{SHIFT}(p={p},dim={d})"),
        vec![
            left_shift::<T>(d).scale_real(T::lit(p.sqrt())),
            right_shift::<T>(d).scale_real(T::lit((1.0 - p).sqrt())),
        ],
    )
}

/// Truncated annihilation operator, `a e_n = √n e_{n−1}`.
pub fn annihilation<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            c(T::from_count(j).sqrt())
        } else {
            czero()
        }
    })
}

/// `e^{−iπa†a}` in the number basis: `diag((−1)ⁿ)`.
pub fn parity_operator<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::diag(
        &(0..d)
            .map(|n| c(if n % 2 == 0 { T::one() } else { -T::one() }))
            .collect::<Vec<_>>(),
    )
}

pub fn parity_fock_channel<T: Real>(p: f64, d: usize) -> Result<KrausChannel<T>> {
    check_open_unit(p)?;
    check_truncation(d)?;
    KrausChannel::new(
        format!("{PARITY_FOCK}(p={p},dim={d})"),
        vec![
            CMatrix::identity(d).scale_real(T::lit(p.sqrt())),
            parity_operator::<T>(d).scale_real(T::lit((1.0 - p).sqrt())),
        ],
    )
}

/// Row `i ≥ 1` of the coefficient triangle `a_j^{(i)}`, `j = 0..i−1`:
/// `a_0 = 1`, interior entries `a_j^{(i−1)} + a_{j−1}^{(i−1)}`, and the last
/// entry `1` for odd `i`, `0` for even `i` (row 1 is just `[1]`).
pub fn a_triangle_row(i: usize) -> Vec<BigUint> {
    assert!(i >= 1, "triangle rows start at 1");
    let mut row = vec![BigUint::one()];
    for k in 2..=i {
        let mut next = Vec::with_capacity(k);
        next.push(BigUint::one());
        for j in 1..k - 1 {
            next.push(&row[j] + &row[j - 1]);
        }
        next.push(if k % 2 == 1 { BigUint::one() } else { BigUint::zero() });
        row = next;
    }
    row
}

/// Exact conversion of a natural number into any numeric field.
fn from_biguint<F: Clone + Num>(n: &BigUint) -> F {
    let two = F::one() + F::one();
    (0..n.bits()).rev().fold(F::zero(), |acc, b| {
        let acc = acc * two.clone();
        if n.bit(b) {
            acc + F::one()
        } else {
            acc
        }
    })
}

/// `f^{(i)}(p) = Σ_{j=0}^{i−1} (−1)ʲ pʲ a_j^{(i)}`.
///
/// The triangle is built in exact integers; the polynomial is evaluated in
/// `F`. With `F = f64` the alternating sum loses accuracy as `i` grows; use
/// [`crate::Exact`] to evaluate exactly at a dyadic `p`.
pub fn f_recursion<F: Clone + Num>(i: usize, p: F) -> F {
    let row = a_triangle_row(i);
    let mut total = F::zero();
    let mut power = F::one();
    for (j, a) in row.iter().enumerate() {
        let term = from_biguint::<F>(a) * power.clone();
        total = if j % 2 == 0 { total + term } else { total - term };
        power = power * p.clone();
    }
    total
}

/// `f^{(i)}(p)/p^{i−1}`, the ratio `x_i/x_1` of the diagonal fixed-point
/// recursion of the untruncated shift channel.
pub fn f_ratio<F: Clone + Num>(i: usize, p: F) -> F {
    let mut denom = F::one();
    for _ in 1..i {
        denom = denom * p.clone();
    }
    f_recursion(i, p) / denom
}

/// Closed-form `φⁿ(X)` for the parity channel: entry `(j, k)` is kept when
/// `j − k` is even and scaled by `(2p − 1)ⁿ` when it is odd.
pub fn parity_iterate_expected<T: Real>(p: f64, d: usize, n: usize, x: &CMatrix<T>) -> Result<CMatrix<T>> {
    if x.shape() != (d, d) {
        return Err(Error::Dimension(format!(
            "expected a {d}x{d} matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let factor = T::lit(2.0 * p - 1.0).powi(n as i32);
    Ok(CMatrix::from_fn(d, d, |j, k| {
        if (j + k) % 2 == 0 {
            x[(j, k)]
        } else {
            x[(j, k)] * factor
        }
    }))
}

/// HS-orthonormal basis `X₁..X₄` of 2×2 matrices diagonalizing the Pauli
/// x/y channel: `I/√2`, `diag(−1, 1)/√2`, `σ_x/√2`, `[[0, −1], [1, 0]]/√2`.
pub fn pauli_basis<T: Real>() -> [CMatrix<T>; 4] {
    let s = T::one() / T::lit(2.0).sqrt();
    let m = |v: [f64; 4]| CMatrix::from_real(2, 2, &v).expect("finite").scale_real(s);
    [
        m([1.0, 0.0, 0.0, 1.0]),
        m([-1.0, 0.0, 0.0, 1.0]),
        m([0.0, 1.0, 1.0, 0.0]),
        m([0.0, -1.0, 1.0, 0.0]),
    ]
}

/// Rank-1 superoperator of `X ↦ Tr{B†X} B`, i.e. `vec(B) vec(B)†`.
pub fn hs_rank_one<T: Real>(b: &CMatrix<T>) -> CMatrix<T> {
    let v = vec(b);
    CMatrix::outer(&v, &v)
}

/// Expected peripheral decomposition of the Pauli x/y channel.
#[derive(Clone, Debug)]
pub struct PauliExpected<T> {
    pub lambdas: Vec<C<T>>,
    pub projectors: Vec<CMatrix<T>>,
    /// Stable eigenpairs `(2p − 1, X₃)` and `(1 − 2p, X₄)`.
    pub stable_pairs: Vec<(C<T>, CMatrix<T>)>,
    pub stable: CMatrix<T>,
}

pub fn pauli_decomposition_expected<T: Real>(p: f64) -> Result<PauliExpected<T>> {
    check_open_unit(p)?;
    let [x1, x2, x3, x4] = pauli_basis::<T>();
    let stable_pairs = vec![(c(T::lit(2.0 * p - 1.0)), x3), (c(T::lit(1.0 - 2.0 * p)), x4)];
    let stable = stable_pairs
        .iter()
        .fold(CMatrix::zeros(4, 4), |acc, (mu, b)| &acc + &hs_rank_one(b).scale(*mu));
    Ok(PauliExpected {
        lambdas: vec![c(T::one()), c(-T::one())],
        projectors: vec![hs_rank_one(&x1), hs_rank_one(&x2)],
        stable_pairs,
        stable,
    })
}

/// Closed-form answers attached to a catalog entry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expected {
    pub fixed_space_dim: Option<usize>,
    pub peripheral: Option<Vec<Complex<f64>>>,
    /// `|1 − 2p|` where the stable part decays at that rate.
    pub decay_rate: Option<f64>,
}

/// A named model with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

impl CatalogEntry {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_owned(),
            params: params.iter().map(|&(k, v)| (k.to_owned(), v)).collect(),
        }
    }

    fn param(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Domain(format!("catalog entry {} needs parameter `{key}`", self.name)))
    }

    fn dim_param(&self) -> Result<usize> {
        let d = self.param("dim")?;
        if d.fract() != 0.0 || !(0.0..=4096.0).contains(&d) {
            return Err(Error::Domain(format!("dim must be a small nonnegative integer, got {d}")));
        }
        Ok(d as usize)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Domain(format!("unknown parameter `{k}` for {}", self.name))),
            None => Ok(()),
        }
    }

    pub fn build<T: Real>(&self) -> Result<KrausChannel<T>> {
        match self.name.as_str() {
            PAULI_XY => {
                self.check_keys(&["p"])?;
                pauli_xy_channel(self.param("p")?)
            }
            SHIFT => {
                self.check_keys(&["p", "dim"])?;
                shift_channel(self.param("p")?, self.dim_param()?)
            }
            PARITY_FOCK => {
                self.check_keys(&["p", "dim"])?;
                parity_fock_channel(self.param("p")?, self.dim_param()?)
            }
            other => Err(Error::Domain(format!("unknown catalog entry `{other}`"))),
        }
    }

    pub fn expected(&self) -> Result<Expected> {
        let p = self.param("p")?;
        let edge = p == 0.0 || p == 1.0;
        Ok(match self.name.as_str() {
            PAULI_XY => Expected {
                fixed_space_dim: Some(if edge { 2 } else { 1 }),
                peripheral: Some(vec![c(1.0), c(-1.0)]),
                decay_rate: (!edge).then(|| (1.0 - 2.0 * p).abs()),
            },
            SHIFT => Expected {
                fixed_space_dim: Some(0),
                peripheral: Some(Vec::new()),
                decay_rate: None,
            },
            PARITY_FOCK => Expected {
                fixed_space_dim: None,
                peripheral: Some(vec![c(1.0)]),
                decay_rate: Some((1.0 - 2.0 * p).abs()),
            },
            other => return Err(Error::Domain(format!("unknown catalog entry `{other}`"))),
        })
    }
}

/// Validate a catalog reference and build its channel.
pub fn lookup<T: Real>(name: &str, params: &BTreeMap<String, f64>) -> Result<KrausChannel<T>> {
    if !ENTRY_NAMES.contains(&name) {
        return Err(Error::Domain(format!("unknown catalog entry `{name}`")));
    }
    CatalogEntry {
        name: name.to_owned(),
        params: params.clone(),
    }
    .build()
}

/// The superoperator `conj(U) ⊗ U` of `X ↦ U X U†`.
pub fn conjugation_superoperator<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    kron(&u.conj(), u)
}
