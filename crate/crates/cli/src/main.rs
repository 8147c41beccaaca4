//! `coherence-kit`: classify channels, evaluate measures, reproduce worked
//! examples and run property suites.
//!
//! stdout carries JSON only; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 a suite or reproduction failed, 2 malformed input
//! or usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use coherence_kit::cases::{reproduce, Case};
use coherence_kit::coherence::{classify_channel, coherence_measures, dilation_construct};
use coherence_kit::discord::{basis_discord, recoverability, RecoveryBudget};
use coherence_kit::io::{parse_basis, parse_bipartite, parse_channel, parse_state, to_report_json};
use coherence_kit::linalg::basis::Basis;
use coherence_kit::linalg::info::Metric;
use coherence_kit::suites::{run_suite, Suite, SuiteOptions};
use coherence_kit::zoo::standard_zoo;
use coherence_kit::Error;

#[derive(Parser)]
#[command(name = "coherence-kit", version, about = "Strictly incoherent operations and basis-dependent discord")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureKind {
    Coherence,
    Discord,
    Recoverability,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a channel's Kraus operators in a basis.
    Classify {
        channel: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Comma-separated eigenvalues of an observable diagonal in the basis.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        observable: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Evaluate coherence, discord or recoverability of a state.
    Measure {
        kind: MeasureKind,
        state: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
        /// trace, fid or relent (recoverability only).
        #[arg(long, default_value = "trace")]
        metric: String,
        /// Optimizer restarts (recoverability only).
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long, env = "COHERENCE_KIT_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Print the ancilla dilation of a strictly incoherent channel.
    Dilation {
        channel: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Reproduce a worked example.
    Reproduce { case: String },
    /// Run a seeded property suite.
    Suite {
        name: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "COHERENCE_KIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "trace")]
        metric: String,
        /// Optimizer restarts for recoverability suites.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        /// Emit one JSON line per trial before the report.
        #[arg(long)]
        per_trial: bool,
    },
    /// Print the channel zoo manifest.
    Zoo,
}

enum Failure {
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_basis(path: Option<&Path>, dim: usize) -> Result<Basis, Failure> {
    let Some(path) = path else {
        return Ok(Basis::computational(dim));
    };
    let b = parse_basis(&read(path)?)?;
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        }
        .into());
    }
    Ok(b)
}

fn metric(name: &str) -> Result<Metric, Failure> {
    Metric::parse(name).ok_or_else(|| Failure::Input(format!("unknown metric '{name}'")))
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", to_report_json(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify {
            channel,
            basis,
            observable,
            tol,
        } => {
            let e = parse_channel(&read(&channel)?)?;
            let b = load_basis(basis.as_deref(), e.dim_in())?;
            emit(&classify_channel(&e, &b, observable.as_deref(), tol)?)
        }
        Command::Measure {
            kind,
            state,
            basis,
            metric: metric_name,
            budget,
            seed,
        } => {
            let text = read(&state)?;
            match kind {
                MeasureKind::Coherence => {
                    let rho = parse_state(&text)?;
                    let b = load_basis(basis.as_deref(), rho.dim())?;
                    emit(&coherence_measures(&rho, &b, seed)?)
                }
                MeasureKind::Discord => {
                    let rho = parse_bipartite(&text)?;
                    let b = load_basis(basis.as_deref(), rho.dim_a())?;
                    emit(&basis_discord(&rho, &b)?)
                }
                MeasureKind::Recoverability => {
                    let m = metric(&metric_name)?;
                    let rho = parse_bipartite(&text)?;
                    let b = load_basis(basis.as_deref(), rho.dim_a())?;
                    let budget = RecoveryBudget {
                        restarts: budget,
                        seed,
                        ..RecoveryBudget::default()
                    };
                    let r = recoverability(&rho, &b, m, &budget)?;
                    emit(&json!({
                        "metric": m.name(),
                        "value": r.value,
                        "petz_value": r.petz_value,
                        "upper_bound": true,
                        "restarts": budget.restarts,
                    }))
                }
            }
        }
        Command::Dilation { channel, basis } => {
            let e = parse_channel(&read(&channel)?)?;
            let b = load_basis(basis.as_deref(), e.dim_in())?;
            emit(&dilation_construct(&e, &b)?)
        }
        Command::Reproduce { case } => {
            let c = Case::parse(&case).ok_or_else(|| {
                let names: Vec<&str> = Case::ALL.iter().map(|c| c.name()).collect();
                Failure::Input(format!("unknown case '{case}'; expected one of {}", names.join(", ")))
            })?;
            let start = Instant::now();
            let r = reproduce(c)?;
            emit(&r)?;
            eprintln!("{}: {} in {:.3?}", c.name(), if r.pass { "pass" } else { "FAIL" }, start.elapsed());
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Suite {
            name,
            trials,
            seed,
            jobs,
            metric: metric_name,
            budget,
            per_trial,
        } => {
            let suite = Suite::parse(&name).ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Failure::Input(format!("unknown suite '{name}'; expected one of {}", names.join(", ")))
            })?;
            let defaults = SuiteOptions::new(suite, seed);
            let opts = SuiteOptions {
                trials: trials.unwrap_or(defaults.trials),
                jobs,
                metric: metric(&metric_name)?,
                restarts: budget,
                ..defaults
            };
            let report = run_suite(suite, &opts)?;
            if per_trial {
                for r in &report.records {
                    emit(r)?;
                }
            }
            emit(&report)?;
            eprintln!(
                "{}: {} trials, {} failures, wall time {:.3?}",
                suite.name(),
                report.trials,
                report.failures.len(),
                report.wall_time
            );
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Zoo => emit(&standard_zoo()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
