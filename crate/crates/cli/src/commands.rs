//! The work behind each subcommand, independent of argument parsing.

use std::collections::BTreeMap;

use ergochan::catalog::{CatalogEntry, ENTRY_NAMES};
use ergochan::channel::VerifyOptions;
use ergochan::ergodic::{
    decay_fit, decompose, eigenvalue_exclusivity, fixed_space, hs_fixed_point_symmetry, peripheral_unitarity_check,
    reconstruct_iterate, splitting_check, FixedSpaceBasis,
};
use ergochan::linalg::operator_norm;
use ergochan::{random, Channel, Complex64, DecompositionOptions, Matrix, Side, Superop, Verification};

use crate::error::{CliError, Result};
use crate::json::{matrix_to_json, nums, pair, to_json, Num};
use crate::report::*;
use crate::spec::{CatalogRef, ChannelSpecFile};

/// A rendered document and whether every asserted invariant held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: String,
    pub ok: bool,
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_PERIPHERAL_TOL: f64 = 1e-8;
pub const DEFAULT_CESARO_N: usize = 10_000;
pub const DEFAULT_DECAY_N: usize = 40;
/// Iterates at which `analyze` compares reconstruction with direct iteration.
pub const RECONSTRUCTION_STEPS: [usize; 5] = [1, 2, 5, 20, 50];
/// Reconstruction tolerance, relative to the largest entry of the input.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub tol: f64,
    pub peripheral_tol: f64,
    pub cesaro_n: usize,
    pub decay_n: usize,
    pub seed: u64,
    pub side: Side,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            peripheral_tol: DEFAULT_PERIPHERAL_TOL,
            cesaro_n: DEFAULT_CESARO_N,
            decay_n: DEFAULT_DECAY_N,
            seed: random::DEFAULT_SEED,
            side: Side::Forward,
        }
    }
}

impl AnalyzeOptions {
    fn decomposition(&self) -> DecompositionOptions<f64> {
        DecompositionOptions {
            peripheral_tol: self.peripheral_tol,
            cesaro_n: self.cesaro_n,
            ..DecompositionOptions::default()
        }
    }
}

fn channel_info(ch: &Channel) -> ChannelInfo {
    ChannelInfo {
        name: ch.label().to_owned(),
        dim: ch.dim(),
        kraus_count: ch.kraus().len(),
    }
}

fn verification_section(r: &Verification) -> VerificationSection {
    VerificationSection {
        cp_ok: r.cp_ok,
        min_choi_eigenvalue: Num(r.min_choi_eigenvalue),
        trace_nonincreasing_ok: r.trace_nonincreasing_ok,
        max_kraus_sum_eigenvalue: Num(r.max_kraus_sum_eigenvalue),
        contraction_ok: r.contraction_ok,
        trace_norm_ratio: Num(r.trace_norm_ratio),
        operator_norm_ratio: Num(r.operator_norm_ratio),
        duality_max_residual: Num(r.duality_max_residual),
        samples: r.samples,
    }
}

fn verification_invariants(r: &Verification) -> Vec<Invariant> {
    let tol = r.tol;
    vec![
        Invariant::at_least("completely positive: min Choi eigenvalue", r.min_choi_eigenvalue, -tol),
        Invariant::at_most("trace non-increasing: max eigenvalue of sum V†V", r.max_kraus_sum_eigenvalue, 1.0 + tol),
        Invariant::at_most("trace-norm contraction", r.trace_norm_ratio, 1.0 + tol),
        Invariant::at_most("operator-norm contraction of the dual", r.operator_norm_ratio, 1.0 + tol),
        Invariant::at_most("duality Tr{phi(X)A} = Tr{X phi*(A)}", r.duality_max_residual, tol),
    ]
}

fn side_name(side: Side) -> String {
    side.to_string()
}

pub fn verify(ch: &Channel, tol: f64, seed: u64) -> Result<VerifyReport> {
    let r = ch.verify(&VerifyOptions {
        tol,
        seed,
        ..VerifyOptions::default()
    })?;
    let invariants = verification_invariants(&r);
    Ok(VerifyReport {
        tool: TOOL.to_owned(),
        channel: channel_info(ch),
        seed,
        tol: Num(tol),
        verification: verification_section(&r),
        ok: invariants.iter().all(|i| i.ok),
        invariants,
    })
}

fn fixed_space_section(f: &FixedSpaceBasis<f64>, l: &Superop) -> FixedSpaceSection {
    FixedSpaceSection {
        dim: f.dim(),
        basis: f.basis.iter().map(matrix_to_json).collect(),
        fixed_residual: Num(f.fixed_residual(l)),
        orthonormality_defect: Num(f.orthonormality_defect()),
    }
}

pub fn fixed_space_report(ch: &Channel, tol: f64, side: Side) -> Result<FixedSpaceReport> {
    let l = ch.superoperator(side);
    let f = fixed_space(&l, tol)?;
    Ok(FixedSpaceReport {
        tool: TOOL.to_owned(),
        channel: channel_info(ch),
        side: side_name(side),
        tol: Num(tol),
        fixed_space: fixed_space_section(&f, &l),
    })
}

/// Seeded test input with unit Hilbert–Schmidt norm.
fn probe_matrix(seed: u64, d: usize) -> Matrix {
    let x: Matrix = random::matrix(&mut random::rng(seed), d, d);
    let n = x.frobenius();
    x.scale_real(1.0 / n)
}

/// The full analysis. A channel that fails verification is not analyzed
/// further; the result is then the verify report.
pub fn analyze(ch: &Channel, opts: &AnalyzeOptions) -> Result<std::result::Result<AnalysisReport, VerifyReport>> {
    let verified = verify(ch, opts.tol, opts.seed)?;
    if !verified.ok {
        return Ok(Err(verified));
    }
    let r = ch.verify(&VerifyOptions {
        tol: opts.tol,
        seed: opts.seed,
        ..VerifyOptions::default()
    })?;
    let d = ch.dim();
    let l = ch.superoperator(opts.side);
    let dopts = opts.decomposition();

    let fixed = fixed_space(&l, opts.tol)?;
    let dec = decompose(&l, &dopts)?;
    let decay = decay_fit(&dec.stable, opts.decay_n.max(1))?;

    let x = probe_matrix(opts.seed, d);
    let x_scale = x.max_abs().max(1.0);
    let mut reconstruction = Vec::new();
    for n in RECONSTRUCTION_STEPS {
        let direct = ch.iterate(opts.side, &x, n)?;
        let recon = reconstruct_iterate(&dec, n, &x)?;
        reconstruction.push(ReconstructionResidual {
            n,
            residual: Num(direct.max_abs_diff(&recon)),
        });
    }

    let split = splitting_check(&l, opts.tol)?;
    let hs_operator_norm = operator_norm(l.matrix())?;
    let symmetry = hs_fixed_point_symmetry(ch, opts.tol)?;
    let unitarity = if dec.projectors.is_empty() {
        None
    } else {
        Some(peripheral_unitarity_check(&l, &dec)?)
    };
    let exclusivity = eigenvalue_exclusivity(&l, &dec)?;

    let mut invariants = verification_invariants(&r);
    let algebra_limit = dopts.algebra_tol * operator_norm(l.matrix())?.max(1.0);
    invariants.push(Invariant::at_most("projector algebra residual", dec.algebra.max(), algebra_limit));
    for (k, (res, bound)) in dec.cesaro_residuals.iter().zip(&dec.cesaro_bounds).enumerate() {
        let lambda = dec.lambdas[k];
        invariants.push(Invariant::at_most(
            &format!("Cesaro average for lambda = {:+.6}{:+.6}i", lambda.re, lambda.im),
            *res,
            *bound,
        ));
    }
    invariants.push(Invariant::at_most(
        "stable spectral radius",
        dec.stable_radius,
        1.0 - opts.peripheral_tol,
    ));
    invariants.push(Invariant::equals(
        "stable part has no peripheral eigenvalues",
        exclusivity.stable_peripheral_count,
        0,
    ));
    invariants.push(Invariant::equals(
        "splitting: dim F + dim Rng(I - L)",
        split.fixed_dim + split.range_dim,
        d * d,
    ));
    let worst_recon = reconstruction.iter().map(|r| r.residual.0).fold(0.0, f64::max);
    invariants.push(Invariant::at_most(
        "reconstruction of iterates",
        worst_recon,
        RECONSTRUCTION_TOL * x_scale,
    ));
    invariants.push(Invariant::equals(
        "decay certificate holds",
        usize::from(decay.certificate_holds()),
        1,
    ));
    // F(T) = F(T*) is a statement about contractions of the HS space.
    if hs_operator_norm <= 1.0 + opts.tol {
        invariants.push(Invariant::at_most("fixed spaces of phi and phi* agree", symmetry.residual, opts.tol));
    }
    // Unimodular spectrum of an HS contraction restricted to its span is
    // unitary; for channels that holds when they are unital and trace
    // preserving.
    if let Some(u) = unitarity {
        if ch.is_trace_preserving(opts.tol) && ch.is_unital(opts.tol) {
            invariants.push(Invariant::at_most("peripheral restriction is unitary", u, UNITARITY_TOL));
        }
    }

    Ok(Ok(AnalysisReport {
        tool: TOOL.to_owned(),
        channel: channel_info(ch),
        side: side_name(opts.side),
        seed: opts.seed,
        tolerances: Tolerances {
            tol: Num(opts.tol),
            peripheral_tol: Num(dopts.peripheral_tol),
            cluster_tol: Num(dopts.cluster_tol),
            algebra_tol: Num(dopts.algebra_tol),
            max_condition: Num(dopts.max_condition),
            cesaro_n: dopts.cesaro_n,
            decay_n: decay.n_max,
        },
        verification: verification_section(&r),
        fixed_space: fixed_space_section(&fixed, &l),
        peripheral: PeripheralSection {
            lambdas: dec.lambdas.iter().copied().map(pair).collect(),
            ranks: dec.ranks.clone(),
            eigvec_condition: Num(dec.eigvec_condition),
        },
        stable_spectral_radius: Num(dec.stable_radius),
        decay: DecaySection {
            m: Num(decay.m),
            epsilon: Num(decay.epsilon),
            norms: nums(&decay.norms),
            certificate_holds: decay.certificate_holds(),
        },
        residuals: ResidualSection {
            idempotence: Num(dec.algebra.idempotence),
            orthogonality: Num(dec.algebra.orthogonality),
            left_eigen: Num(dec.algebra.left_eigen),
            right_eigen: Num(dec.algebra.right_eigen),
            stable_annihilation: Num(dec.algebra.stable_annihilation),
            cesaro: nums(&dec.cesaro_residuals),
            cesaro_bounds: nums(&dec.cesaro_bounds),
            reconstruction,
            splitting: SplittingSection {
                fixed_dim: split.fixed_dim,
                range_dim: split.range_dim,
                direct_sum_residual: Num(split.direct_sum_residual),
                annihilator_residual: Num(split.annihilator_residual),
            },
            hs_operator_norm: Num(hs_operator_norm),
            hs_fixed_symmetry: Num(symmetry.residual),
            peripheral_unitarity: unitarity.map(Num),
            stable_peripheral_count: exclusivity.stable_peripheral_count,
            exclusivity_mismatch: Num(exclusivity.max_mismatch),
        },
        ok: invariants.iter().all(|i| i.ok),
        invariants,
    }))
}

/// `|e₀⟩⟨e₀|`, the default initial state.
pub fn ground_state(d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m
}

/// `φⁿ(X)` by direct application and by the peripheral decomposition.
pub fn iterate(
    ch: &Channel,
    n: usize,
    state: Option<Matrix>,
    side: Side,
    opts: &DecompositionOptions<f64>,
) -> Result<IterateReport> {
    if n == 0 {
        return Err(CliError::Validation("--n must be at least 1".into()));
    }
    let x = state.unwrap_or_else(|| ground_state(ch.dim()));
    let direct = ch.iterate(side, &x, n)?;
    let dec = decompose(&ch.superoperator(side), opts)?;
    let recon = reconstruct_iterate(&dec, n, &x)?;
    let disagreement = direct.max_abs_diff(&recon);
    let limit = RECONSTRUCTION_TOL * x.max_abs().max(1.0);
    Ok(IterateReport {
        tool: TOOL.to_owned(),
        channel: channel_info(ch),
        side: side_name(side),
        n,
        initial: matrix_to_json(&x),
        direct: matrix_to_json(&direct),
        reconstructed: matrix_to_json(&recon),
        disagreement: Num(disagreement),
        limit: Num(limit),
        ok: disagreement <= limit,
    })
}

/// Spec file for a catalog entry: explicit Kraus operators, or with
/// `reference` the `catalog` form that names the entry.
pub fn catalog_spec(entry: &str, params: &BTreeMap<String, f64>, reference: bool) -> Result<ChannelSpecFile> {
    if !ENTRY_NAMES.contains(&entry) {
        return Err(CliError::Lookup(entry.to_owned()));
    }
    let ch: Channel = CatalogEntry {
        name: entry.to_owned(),
        params: params.clone(),
    }
    .build()?;
    Ok(if reference {
        ChannelSpecFile {
            name: ch.label().to_owned(),
            dim: ch.dim(),
            kraus: None,
            catalog: Some(CatalogRef {
                entry: entry.to_owned(),
                params: params.clone(),
            }),
        }
    } else {
        ChannelSpecFile::from_channel(&ch)
    })
}

pub fn render_analysis(result: std::result::Result<AnalysisReport, VerifyReport>) -> Outcome {
    match result {
        Ok(report) => Outcome {
            ok: report.ok,
            document: to_json(&report),
        },
        Err(failed) => Outcome {
            ok: false,
            document: to_json(&failed),
        },
    }
}
