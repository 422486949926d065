//! Report documents written by the subcommands.

use serde::{Deserialize, Serialize};

use crate::json::{MatrixJson, Num, Pair};

pub const TOOL: &str = concat!("ergochan ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelInfo {
    pub name: String,
    pub dim: usize,
    pub kraus_count: usize,
}

/// One asserted check: `ok` iff `value` is on the right side of `limit`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Invariant {
    pub name: String,
    pub ok: bool,
    pub value: Num,
    pub limit: Num,
}

impl Invariant {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_owned(),
            ok: value <= limit,
            value: Num(value),
            limit: Num(limit),
        }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_owned(),
            ok: value >= limit,
            value: Num(value),
            limit: Num(limit),
        }
    }

    pub fn equals(name: &str, value: usize, expected: usize) -> Self {
        Self {
            name: name.to_owned(),
            ok: value == expected,
            value: Num(value as f64),
            limit: Num(expected as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationSection {
    pub cp_ok: bool,
    pub min_choi_eigenvalue: Num,
    pub trace_nonincreasing_ok: bool,
    pub max_kraus_sum_eigenvalue: Num,
    pub contraction_ok: bool,
    pub trace_norm_ratio: Num,
    pub operator_norm_ratio: Num,
    pub duality_max_residual: Num,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub tool: String,
    pub channel: ChannelInfo,
    pub seed: u64,
    pub tol: Num,
    pub verification: VerificationSection,
    pub invariants: Vec<Invariant>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSpaceSection {
    pub dim: usize,
    /// HS-orthonormal basis matrices.
    pub basis: Vec<MatrixJson>,
    pub fixed_residual: Num,
    pub orthonormality_defect: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSpaceReport {
    pub tool: String,
    pub channel: ChannelInfo,
    pub side: String,
    pub tol: Num,
    pub fixed_space: FixedSpaceSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tol: Num,
    pub peripheral_tol: Num,
    pub cluster_tol: Num,
    pub algebra_tol: Num,
    pub max_condition: Num,
    pub cesaro_n: usize,
    pub decay_n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeripheralSection {
    pub lambdas: Vec<Pair>,
    pub ranks: Vec<usize>,
    pub eigvec_condition: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySection {
    #[serde(rename = "M")]
    pub m: Num,
    pub epsilon: Num,
    /// `norms[k] = ‖S^{k+1}‖`.
    pub norms: Vec<Num>,
    pub certificate_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionResidual {
    pub n: usize,
    pub residual: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingSection {
    pub fixed_dim: usize,
    pub range_dim: usize,
    pub direct_sum_residual: Num,
    pub annihilator_residual: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualSection {
    pub idempotence: Num,
    pub orthogonality: Num,
    pub left_eigen: Num,
    pub right_eigen: Num,
    pub stable_annihilation: Num,
    pub cesaro: Vec<Num>,
    pub cesaro_bounds: Vec<Num>,
    pub reconstruction: Vec<ReconstructionResidual>,
    pub splitting: SplittingSection,
    /// Operator norm of the superoperator on the Hilbert–Schmidt space.
    pub hs_operator_norm: Num,
    /// Distance between the fixed spaces of φ and φ* on the HS space.
    pub hs_fixed_symmetry: Num,
    /// `max |σ − 1|` of the map restricted to the peripheral span; absent
    /// when there is no peripheral spectrum.
    pub peripheral_unitarity: Option<Num>,
    pub stable_peripheral_count: usize,
    pub exclusivity_mismatch: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub tool: String,
    pub channel: ChannelInfo,
    pub side: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub verification: VerificationSection,
    pub fixed_space: FixedSpaceSection,
    pub peripheral: PeripheralSection,
    pub stable_spectral_radius: Num,
    pub decay: DecaySection,
    pub residuals: ResidualSection,
    pub invariants: Vec<Invariant>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterateReport {
    pub tool: String,
    pub channel: ChannelInfo,
    pub side: String,
    pub n: usize,
    pub initial: MatrixJson,
    pub direct: MatrixJson,
    pub reconstructed: MatrixJson,
    /// Largest entrywise difference between the two results.
    pub disagreement: Num,
    pub limit: Num,
    pub ok: bool,
}
