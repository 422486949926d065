use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use ergochan::catalog::ENTRY_NAMES;
use ergochan::random::DEFAULT_SEED;
use ergochan::{DecompositionOptions, Side};
use ergochan_cli::commands::{
    self, AnalyzeOptions, Outcome, DEFAULT_CESARO_N, DEFAULT_DECAY_N, DEFAULT_PERIPHERAL_TOL, DEFAULT_TOL,
};
use ergochan_cli::error::{CliError, EXIT_INVARIANT};
use ergochan_cli::json::to_json;
use ergochan_cli::spec::{load_matrix, load_spec};

/// Fixed spaces, peripheral spectra and iterate decompositions of quantum
/// channels given by Kraus operators.
#[derive(Parser)]
#[command(name = "ergochan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArg {
    /// Seed for randomized probes.
    #[arg(long, env = "ERGOCHAN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct Peripheral {
    /// Eigenvalues with |λ| ≥ 1 − this are peripheral.
    #[arg(long, default_value_t = DEFAULT_PERIPHERAL_TOL)]
    peripheral_tol: f64,
    /// Terms in the Cesàro average cross-check.
    #[arg(long, default_value_t = DEFAULT_CESARO_N)]
    cesaro_n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check complete positivity, trace non-increase, contraction and duality.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        common: Common,
    },
    /// Full report: fixed space, peripheral projectors, stable decay and residuals.
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        peripheral: Peripheral,
        /// Largest power used for the decay fit.
        #[arg(long = "n", default_value_t = DEFAULT_DECAY_N)]
        n: usize,
        /// Analyze the Heisenberg dual φ* instead of φ.
        #[arg(long)]
        adjoint: bool,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare φⁿ(X) computed directly with the spectral reconstruction.
    Iterate {
        spec: PathBuf,
        #[arg(long = "n")]
        n: usize,
        /// Initial matrix as nested [re, im] pairs; defaults to |0⟩⟨0|.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        adjoint: bool,
        #[command(flatten)]
        peripheral: Peripheral,
        #[command(flatten)]
        common: Common,
    },
    /// Orthonormal basis of the fixed space.
    FixedSpace {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        adjoint: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a spec file for a built-in model; without ENTRY, list the models.
    Catalog {
        entry: Option<String>,
        /// Model parameter, e.g. `--param p=0.3 --param dim=8`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Refer to the entry by name instead of writing out Kraus operators.
        #[arg(long)]
        reference: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value for `{k}`: {e}"))?;
    Ok((k.trim().to_owned(), v))
}

fn side(adjoint: bool) -> Side {
    if adjoint {
        Side::Adjoint
    } else {
        Side::Forward
    }
}

fn decomposition(p: &Peripheral) -> DecompositionOptions<f64> {
    DecompositionOptions {
        peripheral_tol: p.peripheral_tol,
        cesaro_n: p.cesaro_n,
        ..DecompositionOptions::default()
    }
}

fn emit(out: &Option<PathBuf>, document: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, document).map_err(|e| CliError::io(path, e))?,
        None => print!("{document}"),
    }
    Ok(())
}

fn load(path: &Path) -> anyhow::Result<ergochan::Channel> {
    load_spec(path).with_context(|| format!("loading channel spec {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (outcome, out) = match cli.command {
        Command::Verify { spec, tol, seed, common } => {
            let report = commands::verify(&load(&spec)?, tol, seed.seed)?;
            (Outcome { ok: report.ok, document: to_json(&report) }, common.out)
        }
        Command::Analyze { spec, tol, peripheral, n, adjoint, seed, common } => {
            let opts = AnalyzeOptions {
                tol,
                peripheral_tol: peripheral.peripheral_tol,
                cesaro_n: peripheral.cesaro_n,
                decay_n: n,
                seed: seed.seed,
                side: side(adjoint),
            };
            let result = commands::analyze(&load(&spec)?, &opts)?;
            if result.is_err() {
                eprintln!("channel fails verification; emitting the verify report");
            }
            (commands::render_analysis(result), common.out)
        }
        Command::Iterate { spec, n, state, adjoint, peripheral, common } => {
            let ch = load(&spec)?;
            let x = match state {
                Some(path) => Some(load_matrix(&path, ch.dim())?),
                None => None,
            };
            let report = commands::iterate(&ch, n, x, side(adjoint), &decomposition(&peripheral))?;
            (Outcome { ok: report.ok, document: to_json(&report) }, common.out)
        }
        Command::FixedSpace { spec, tol, adjoint, common } => {
            let report = commands::fixed_space_report(&load(&spec)?, tol, side(adjoint))?;
            (Outcome { ok: true, document: to_json(&report) }, common.out)
        }
        Command::Catalog { entry: None, common, .. } => {
            let list: String = ENTRY_NAMES.iter().map(|e| format!("{e}\n")).collect();
            (Outcome { ok: true, document: list }, common.out)
        }
        Command::Catalog { entry: Some(entry), params, reference, common } => {
            let params: BTreeMap<String, f64> = params.into_iter().collect();
            let spec = commands::catalog_spec(&entry, &params, reference)?;
            (Outcome { ok: true, document: to_json(&spec) }, common.out)
        }
    };
    emit(&out, &outcome.document)?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INVARIANT),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
