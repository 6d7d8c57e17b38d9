//! Command-line front end. Exit codes: 0 success, 2 bad input, 3 solver did
//! not converge (output is still written).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qsd::bounds::{bounds_report, BoundsReport};
use qsd::experiments::{fig1, fig2, fig2_csv, fig3, fig3_csv, fig4, fig4_log_csv};
use qsd::io::{matrix_pairs, read_ensemble};
use qsd::sampling::RngSeed;
use qsd::solver::{solve_with, SolveOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use qsd::support::{extract_support, support_is_ambiguous, SupportOptions, DEFAULT_SUPPORT_TOL};
use qsd::Error;

#[derive(Parser)]
#[command(name = "qsd", version, about = "Minimum-error quantum state discrimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Common {
    /// Certified optimality gap for the solver.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal measurement, support and bounds for an ensemble file (JSON out).
    Discriminate {
        #[arg(long)]
        ensemble: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the bounds table as CSV here.
        #[arg(long)]
        bounds_csv: Option<PathBuf>,
    },
    /// Equidistant triple: closed form vs solver over alpha.
    Fig1 {
        #[arg(long, default_value_t = 0.5)]
        alpha_min: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Mirror triple (theta, p) grid classification.
    Fig2 {
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Qubit triple with the third state swept over the sphere.
    Fig3 {
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Support bracket coincidence rates on random qubit triples.
    Fig4 {
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
        /// Also write the per-instance log as CSV here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Discrimination {
    p_opt: f64,
    gap: f64,
    upper_bound: f64,
    iterations: usize,
    converged: bool,
    support: Vec<usize>,
    ambiguous_support: bool,
    /// Row-major `[re, im]` pairs per operator.
    povm: Vec<Vec<[f64; 2]>>,
    bounds: BoundsReport,
}

enum Failure {
    Input(String),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solver_opts(tol: f64) -> Result<SolveOptions, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
    }
    Ok(SolveOptions {
        tol,
        max_iter: DEFAULT_MAX_ITER,
        ..SolveOptions::default()
    })
}

fn converged_or(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Discriminate {
            ensemble,
            common,
            bounds_csv,
        } => {
            let e = read_ensemble(&ensemble)?;
            let (res, converged) = match solve_with(&e, &solver_opts(common.tol)?) {
                Ok(r) => (r, true),
                Err(Error::NotConverged(r)) => (*r, false),
                Err(err) => return Err(err.into()),
            };
            let support = extract_support(&res.povm, DEFAULT_SUPPORT_TOL);
            let bounds = bounds_report(&e, Some(&support));
            if let Some(p) = bounds_csv {
                emit(Some(&p), &bounds.to_csv())?;
            }
            let report = Discrimination {
                p_opt: res.p_success,
                gap: res.gap,
                upper_bound: res.upper_bound,
                iterations: res.iterations,
                converged,
                support: support.iter().copied().collect(),
                ambiguous_support: support_is_ambiguous(&res.povm),
                povm: res.povm.operators().iter().map(matrix_pairs).collect(),
                bounds,
            };
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            emit(common.out.as_deref(), &json)?;
            converged_or(converged)
        }
        Command::Fig1 {
            alpha_min,
            alpha_max,
            steps,
            common,
        } => {
            let f = fig1(alpha_min, alpha_max, steps, &solver_opts(common.tol)?)?;
            emit(common.out.as_deref(), &f.to_csv())?;
            eprintln!("max discrepancy {:e}", f.max_discrepancy);
            converged_or(f.converged())
        }
        Command::Fig2 { grid, out } => {
            let rows = fig2(grid)?;
            emit(out.as_deref(), &fig2_csv(&rows))
        }
        Command::Fig3 { grid, common } => {
            let rows = fig3(grid, &solver_opts(common.tol)?)?;
            emit(common.out.as_deref(), &fig3_csv(&rows))?;
            converged_or(rows.iter().all(|r| r.converged))
        }
        Command::Fig4 {
            instances,
            seed,
            common,
            log,
        } => {
            if instances == 0 {
                return Err(Failure::Input("--instances must be at least 1".into()));
            }
            let opts = SupportOptions {
                solver: solver_opts(common.tol)?,
                ..SupportOptions::default()
            };
            let f = fig4(instances, RngSeed(seed), &opts)?;
            emit(common.out.as_deref(), &f.stats.to_csv())?;
            if let Some(p) = log {
                emit(Some(&p), &fig4_log_csv(&f.records))?;
            }
            eprintln!(
                "ambiguous {}, not converged {}, violations {:?}",
                f.stats.ambiguous, f.stats.not_converged, f.stats.violations
            );
            converged_or(f.stats.not_converged == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged) => {
            eprintln!("warning: solver did not converge; output written");
            ExitCode::from(3)
        }
    }
}
