//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

// `!(x <= limit)` throughout: a NaN must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::error::Error as StdError;
use std::process::ExitCode;
use std::time::Instant;

use ergochan::catalog::{
    f_ratio, hs_rank_one, parity_fock_channel, pauli_basis, pauli_xy_channel, shift_channel,
    parity_iterate_expected, sigma_x, CatalogEntry, PARITY_FOCK, PAULI_XY, SHIFT,
};
use ergochan::channel::VerifyOptions;
use ergochan::ergodic::{
    cesaro_average, decay_fit, decompose, eigenvalue_exclusivity, fixed_space, fixed_space_intersection,
    hs_fixed_point_symmetry, peripheral_unitarity_check, reconstruct_iterate, splitting_check,
    stable_eigenvalues,
};
use ergochan::linalg::operator_norm;
use ergochan::{random, Channel, Complex64, DecompositionOptions, Exact, KrausChannel, Matrix, Side, Superop};
use num_traits::ToPrimitive;

type Outcome = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest distance in a greedy one-to-one matching of two multisets.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut pool: Vec<Option<Complex64>> = b.iter().copied().map(Some).collect();
    let mut worst = 0.0f64;
    for x in a {
        let (i, d) = pool
            .iter()
            .enumerate()
            .filter_map(|(i, y)| y.map(|y| (i, (x - y).norm())))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("pools have equal size");
        pool[i] = None;
        worst = worst.max(d);
    }
    worst
}

fn pauli_fixed_spaces() -> Outcome {
    let i2 = Matrix::identity(2);
    let rot = Matrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0])?;
    let cases: [(f64, usize, Vec<Matrix>); 4] = [
        (0.0, 2, vec![i2.clone(), rot]),
        (0.3, 1, vec![i2.clone()]),
        (0.7, 1, vec![i2.clone()]),
        (1.0, 2, vec![i2.clone(), sigma_x()]),
    ];
    let mut worst = 0.0f64;
    for (p, dim, span) in cases {
        let l = pauli_xy_channel::<f64>(p)?.superoperator(Side::Forward);
        let f = fixed_space(&l, 1e-8)?;
        ensure!(f.dim() == dim, "p={p}: fixed space dimension {} != {dim}", f.dim());
        let r = f.distance_to_span(&span);
        ensure!(r <= 1e-8, "p={p}: HS projection residual {r:e}");
        worst = worst.max(r);
    }
    Ok(format!("dims 2,1,1,2; worst residual {worst:.1e}"))
}

fn pauli_decomposition() -> Outcome {
    let [x1, x2, ..] = pauli_basis::<f64>();
    let (mut w_lambda, mut w_proj, mut w_stable, mut w_norm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in [0.25, 0.5, 0.9] {
        let l = pauli_xy_channel::<f64>(p)?.superoperator(Side::Forward);
        let dec = decompose(&l, &DecompositionOptions::default())?;

        let dl = multiset_distance(&dec.lambdas, &[re(1.0), re(-1.0)]);
        ensure!(dl <= 1e-10, "p={p}: peripheral set off by {dl:e}");
        w_lambda = w_lambda.max(dl);

        for (lambda, target) in [(1.0, &x1), (-1.0, &x2)] {
            let k = dec
                .lambdas
                .iter()
                .position(|z| (z - re(lambda)).norm() <= 1e-10)
                .ok_or("missing peripheral eigenvalue")?;
            let r = operator_norm(&(&dec.projectors[k] - &hs_rank_one(target)))?;
            ensure!(r <= 1e-8, "p={p}: projector for {lambda} off by {r:e}");
            w_proj = w_proj.max(r);
        }

        let ds = multiset_distance(&stable_eigenvalues(&dec)?, &[re(2.0 * p - 1.0), re(1.0 - 2.0 * p)]);
        ensure!(ds <= 1e-10, "p={p}: stable eigenvalues off by {ds:e}");
        w_stable = w_stable.max(ds);

        let fit = decay_fit(&dec.stable, 40)?;
        let rate = (1.0 - 2.0 * p).abs();
        for (k, &norm) in fit.norms.iter().enumerate() {
            let expected = rate.powi(k as i32 + 1);
            let err = if expected == 0.0 {
                // |1 - 2p| = 0: only round-off remains
                ensure!(norm <= 1e-14, "p={p}: ||S^{}|| = {norm:e}, expected 0", k + 1);
                0.0
            } else {
                (norm - expected).abs() / expected
            };
            ensure!(err <= 1e-10, "p={p}: ||S^{}|| relative error {err:e}", k + 1);
            w_norm = w_norm.max(err);
        }
    }
    Ok(format!(
        "lambda {w_lambda:.1e}, projectors {w_proj:.1e}, stable eigenvalues {w_stable:.1e}, ||S^n|| rel {w_norm:.1e}"
    ))
}

fn parity_fock() -> Outcome {
    let (p, d) = (0.3, 8);
    let ch = parity_fock_channel::<f64>(p, d)?;
    let l = ch.superoperator(Side::Forward);
    let dec = decompose(&l, &DecompositionOptions::default())?;
    let dl = multiset_distance(&dec.lambdas, &[re(1.0)]);
    ensure!(dl <= 1e-10, "peripheral set {:?}", dec.lambdas);
    let even_pairs = (0..d).flat_map(|j| (0..d).map(move |k| (j, k))).filter(|(j, k)| (j + k) % 2 == 0).count();
    ensure!(dec.ranks == vec![even_pairs], "projector rank {:?}, expected {even_pairs}", dec.ranks);

    let mut rng = random::rng(random::DEFAULT_SEED);
    let x: Matrix = random::matrix(&mut rng, d, d);
    let mut worst = 0.0f64;
    for n in [1, 5, 50] {
        let oracle = parity_iterate_expected(p, d, n, &x)?;
        let recon = reconstruct_iterate(&dec, n, &x)?;
        let direct = ch.iterate(Side::Forward, &x, n)?;
        let disagreement = oracle
            .max_abs_diff(&recon)
            .max(oracle.max_abs_diff(&direct))
            .max(recon.max_abs_diff(&direct));
        ensure!(disagreement <= 1e-9, "n={n}: three-way disagreement {disagreement:e}");
        worst = worst.max(disagreement);
    }

    let fit = decay_fit(&dec.stable, 50)?;
    for (k, &norm) in fit.norms.iter().enumerate() {
        let bound = 0.4f64.powi(k as i32 + 1) * (1.0 + 1e-10);
        ensure!(norm <= bound, "||S^{}|| = {norm:e} exceeds {bound:e}", k + 1);
    }
    Ok(format!("rank {even_pairs}, three-way disagreement {worst:.1e}, ||S^n|| <= 0.4^n for n <= 50"))
}

fn shift_channel_checks() -> Outcome {
    let ch = shift_channel::<f64>(0.5, 16)?;
    let report = ch.verify(&VerifyOptions::default())?;
    ensure!(report.all_ok(), "verify failed: {report:?}");
    let f = fixed_space(&ch.superoperator(Side::Forward), 1e-8)?;
    ensure!(f.is_empty(), "fixed space has dimension {}", f.dim());

    let mut worst = 0.0f64;
    for p in [0.2f64, 0.5, 0.8] {
        let pe = Exact::from_float(p).ok_or("p is not finite")?;
        for i in 2..=20 {
            let lhs = (f_ratio(i + 1, pe.clone()) - f_ratio(i, pe.clone()))
                .to_f64()
                .ok_or("ratio does not fit in f64")?;
            let rhs = ((1.0 - p) / p).powi(i as i32);
            let err = (lhs - rhs).abs() / rhs.abs();
            ensure!(err <= 1e-9, "p={p}, i={i}: telescoping relative error {err:e}");
            worst = worst.max(err);
        }
        for i in 2..=21 {
            let ratio = f_ratio(i, pe.clone());
            ensure!(ratio > Exact::from_integer(1.into()), "p={p}, i={i}: f/p^(i-1) = {ratio} <= 1");
        }
    }
    Ok(format!("verify ok, fixed space empty, telescoping rel {worst:.1e}, ratios > 1"))
}

fn catalog_instances() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = [0.0, 0.25, 0.3, 0.5, 0.7, 0.9, 1.0]
        .iter()
        .map(|&p| CatalogEntry::new(PAULI_XY, &[("p", p)]))
        .collect();
    for (p, d) in [(0.5, 16.0), (0.2, 8.0), (0.8, 5.0)] {
        out.push(CatalogEntry::new(SHIFT, &[("p", p), ("dim", d)]));
    }
    for (p, d) in [(0.3, 8.0), (0.5, 4.0), (0.7, 5.0), (0.1, 2.0)] {
        out.push(CatalogEntry::new(PARITY_FOCK, &[("p", p), ("dim", d)]));
    }
    out
}

fn theorem_invariants() -> Outcome {
    let opts = DecompositionOptions::default();
    let (mut w_alg, mut w_dual, mut w_unit) = (0.0f64, 0.0f64, 0.0f64);
    let entries = catalog_instances();
    for entry in &entries {
        let ch: Channel = entry.build()?;
        let name = ch.label().to_owned();
        let d = ch.dim();

        let report = ch.verify(&VerifyOptions::default())?;
        ensure!(report.contraction_ok, "{name}: contraction failed: {report:?}");
        ensure!(report.duality_max_residual <= 1e-11, "{name}: duality residual {:e}", report.duality_max_residual);
        w_dual = w_dual.max(report.duality_max_residual);

        let sym = hs_fixed_point_symmetry(&ch, 1e-8)?;
        ensure!(sym.equal, "{name}: F(phi) and F(phi*) differ by {:e}", sym.residual);

        for side in [Side::Forward, Side::Adjoint] {
            let l = ch.superoperator(side);
            let split = splitting_check(&l, 1e-8)?;
            ensure!(
                split.fixed_dim + split.range_dim == d * d,
                "{name} ({side}): splitting {} + {} != {}",
                split.fixed_dim,
                split.range_dim,
                d * d
            );

            let dec = decompose(&l, &opts)?;
            let alg = dec.algebra.max();
            ensure!(alg <= 1e-8, "{name} ({side}): projector algebra residual {alg:e}");
            w_alg = w_alg.max(alg);

            let excl = eigenvalue_exclusivity(&l, &dec)?;
            ensure!(excl.stable_peripheral_count == 0, "{name} ({side}): S has peripheral eigenvalues");

            if ch.is_trace_preserving(1e-12) && !dec.projectors.is_empty() {
                let u = peripheral_unitarity_check(&l, &dec)?;
                ensure!(u <= 1e-8, "{name} ({side}): peripheral singular values off by {u:e}");
                w_unit = w_unit.max(u);
            }
        }
    }
    Ok(format!(
        "{} channels; algebra {w_alg:.1e}, duality {w_dual:.1e}, peripheral unitarity {w_unit:.1e}",
        entries.len()
    ))
}

fn cesaro_convergence() -> Outcome {
    let l = pauli_xy_channel::<f64>(0.3)?.superoperator(Side::Forward);
    let dec = decompose(&l, &DecompositionOptions::default())?;
    let mut lines = Vec::new();
    for (lambda, proj) in dec.lambdas.iter().zip(&dec.projectors) {
        let mut previous = f64::INFINITY;
        let mut seq = Vec::new();
        for n in [100usize, 1_000, 10_000] {
            let r = operator_norm(&(&cesaro_average(&l, *lambda, n)? - proj))?;
            ensure!(r < previous, "lambda={lambda}: residual {r:e} at n={n} did not decrease");
            ensure!(r <= 5.0 / n as f64, "lambda={lambda}: residual {r:e} exceeds 5/{n}");
            previous = r;
            seq.push(format!("{r:.1e}"));
        }
        lines.push(format!("lambda {:+.0}: {}", lambda.re, seq.join(" > ")));
    }
    Ok(lines.join("; "))
}

fn diag_unitary(phases: &[f64]) -> Matrix {
    Matrix::diag(&phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect::<Vec<_>>())
}

fn commuting_combination() -> Outcome {
    use std::f64::consts::{FRAC_PI_2, PI};
    let a = KrausChannel::unitary("u1", diag_unitary(&[0.0, 0.0, PI]))?;
    let b = KrausChannel::unitary("u2", diag_unitary(&[0.0, FRAC_PI_2, FRAC_PI_2]))?;
    let rep = fixed_space_intersection(&[a, b], &[0.4, 0.6], 1e-8)?;
    ensure!(rep.equal == Some(true), "commuting pair: equal = {:?}", rep.equal);
    ensure!(rep.subspace_residual <= 1e-8, "commuting pair residual {:e}", rep.subspace_residual);

    let sx = KrausChannel::unitary("sigma-x", sigma_x())?;
    let phase = KrausChannel::unitary("phase", diag_unitary(&[0.0, FRAC_PI_2]))?;
    let nc = fixed_space_intersection(&[sx, phase], &[0.4, 0.6], 1e-8)?;
    ensure!(nc.commute_residual > 1e-8, "non-commuting pair commutator {:e}", nc.commute_residual);
    ensure!(nc.equal.is_none(), "equality asserted for a non-commuting pair");
    Ok(format!(
        "fixed dim {} = intersection dim {} (residual {:.1e}); non-commuting commutator {:.3}",
        rep.combined_fixed.dim(),
        rep.intersection.dim(),
        rep.subspace_residual,
        nc.commute_residual
    ))
}

fn negative_controls() -> Outcome {
    let t = Superop::transpose_map(2);
    let min = t.min_choi_eigenvalue()?;
    ensure!((min + 1.0).abs() <= 1e-10, "transpose map min Choi eigenvalue {min}");
    ensure!(min < -1e-10, "transpose map not flagged non-CP");

    let ch = KrausChannel::new("sqrt2-identity", vec![Matrix::identity(2).scale_real(2f64.sqrt())])?;
    let rep = ch.verify(&VerifyOptions::default())?;
    ensure!(!rep.trace_nonincreasing_ok, "sqrt2 identity passed the trace condition");
    ensure!(!rep.all_ok(), "sqrt2 identity passed verification");
    let e = rep.max_kraus_sum_eigenvalue;
    ensure!((e - 2.0).abs() <= 1e-12, "max Kraus-sum eigenvalue {e}");
    Ok(format!("min Choi {min:.12}, max Kraus-sum eigenvalue {e:.12}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("pauli-xy fixed spaces", pauli_fixed_spaces),
        ("pauli-xy spectral decomposition", pauli_decomposition),
        ("parity-fock iterates and decay", parity_fock),
        ("shift channel and recursion", shift_channel_checks),
        ("invariants on catalog channels", theorem_invariants),
        ("Cesaro convergence", cesaro_convergence),
        ("commuting convex combination", commuting_combination),
        ("negative controls", negative_controls),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{elapsed:.2}s]", k + 1),
            Err(err) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {err} [{elapsed:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
