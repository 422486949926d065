use crate::error::{Error, Result};
use crate::linalg::{operator_norm, spectral_radius, CMatrix};
use crate::scalar::Real;

/// Certificate `‖Sⁿ‖ ≤ M/(1+ε)ⁿ` for `n = 1..=n_max`.
///
/// Norms are the largest singular value of the superoperator power, i.e.
/// the operator norm induced by the Hilbert–Schmidt norm.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit<T> {
    pub m: T,
    pub epsilon: T,
    pub n_max: usize,
    /// `norms[k] = ‖S^{k+1}‖`.
    pub norms: Vec<T>,
    pub spectral_radius: T,
}

impl<T: Real> DecayFit<T> {
    /// Whether `‖Sⁿ‖ ≤ M/(1+ε)ⁿ` holds for every recorded `n`.
    ///
    /// Evaluated as `ln‖Sⁿ‖ + n·ln(1+ε) ≤ ln M` so large `n` cannot overflow.
    pub fn certificate_holds(&self) -> bool {
        let rate = self.epsilon.ln_1p();
        self.norms.iter().enumerate().all(|(k, &norm)| {
            norm == T::zero() || (self.m > T::zero() && norm.ln() + T::from_count(k + 1) * rate <= self.m.ln())
        })
    }

    /// `M/(1+ε)ⁿ`.
    pub fn bound(&self, n: usize) -> T {
        (self.m.ln() - T::from_count(n) * self.epsilon.ln_1p()).exp()
    }
}

/// Safety margin on the decay rate.
pub const DECAY_MARGIN: f64 = 1e-3;

/// Fit a decay certificate for the stable part `S`.
///
/// The rate comes from the spectral radius: `1+ε = (1 − margin)/ρ(S)`, with
/// `ρ(S)` floored at the margin so nilpotent or round-off-sized `S` gives a
/// finite rate. When `ρ(S) ≥ 1 − margin` the rate falls back to the
/// geometric midpoint `1+ε = ρ(S)^{-1/2}`. `M` is then the smallest constant
/// that makes every recorded norm satisfy the bound, inflated by a few ulps;
/// the certificate is re-verified before returning.
pub fn decay_fit<T: Real>(s: &CMatrix<T>, n_max: usize) -> Result<DecayFit<T>> {
    if n_max == 0 {
        return Err(Error::Domain("decay fit needs n_max >= 1".into()));
    }
    let margin = T::lit(DECAY_MARGIN);
    let rho = spectral_radius(s)?;
    if rho >= T::one() {
        return Err(Error::Domain(format!("stable part has spectral radius {rho} >= 1")));
    }

    let mut norms = Vec::with_capacity(n_max);
    let mut power = s.clone();
    for k in 1..=n_max {
        norms.push(operator_norm(&power)?);
        if k < n_max {
            power = &power * s;
        }
    }

    if norms.iter().all(|&x| x == T::zero()) {
        return Ok(DecayFit {
            m: T::zero(),
            epsilon: margin,
            n_max,
            norms,
            spectral_radius: rho,
        });
    }

    let rho_eff = rho.max(margin);
    let mut growth = (T::one() - margin) / rho_eff;
    if growth <= T::one() {
        growth = T::one() / rho_eff.sqrt();
    }
    let epsilon = growth - T::one();
    let rate = growth.ln();
    let log_m = norms
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > T::zero())
        .map(|(k, &x)| x.ln() + T::from_count(k + 1) * rate)
        .fold(T::neg_infinity(), T::max);
    let m = log_m.exp() * (T::one() + T::lit(8.0) * T::epsilon());

    let fit = DecayFit {
        m,
        epsilon,
        n_max,
        norms,
        spectral_radius: rho,
    };
    if !fit.certificate_holds() {
        return Err(Error::Decomposition("decay certificate failed re-verification".into()));
    }
    Ok(fit)
}
