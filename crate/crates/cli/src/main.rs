//! `submod` — command-line front end for the submodular optimization
//! toolkit.
//!
//! Every run emits a single JSON report (stdout by default, `--json <path>`
//! to a file). Exit codes: 0 success, 2 input or parse error, 3 budget
//! error or non-certified result, 4 internal contract violation.

mod commands;
mod error;
mod formats;
mod report;

use clap::{Parser, Subcommand};

use commands::Context;
use error::CliError;
use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "submod", version, about = "Submodular optimization toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Instance file.
    #[arg(long, global = true)]
    instance: Option<String>,

    /// Instance kind: graph | coverage | modular.
    #[arg(long, global = true)]
    kind: Option<String>,

    /// Point in [0,1]^X: comma list in ground order, or @file.
    #[arg(long, global = true)]
    x: Option<String>,

    /// Cardinality bound.
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Element label (cardmin: run only this guess).
    #[arg(long, global = true)]
    v1: Option<String>,

    /// Matroid: uniform:<k> | partition:<blocks>:<caps> | graphic:<path>.
    #[arg(long, global = true)]
    matroid: Option<String>,

    /// Continuous-greedy step count (default n^2).
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Monte Carlo sample count (switches sampled mode on).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Seed for sampled paths (falls back to SUBMOD_SEED, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Solver tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Solver iteration budget.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Write the JSON report here instead of stdout ("-" = stdout).
    #[arg(long, global = true)]
    json: Option<String>,

    /// Solve by brute-force enumeration instead of the solver.
    #[arg(long, global = true)]
    brute: bool,

    /// Cross-check against brute force (n <= 12) and report the ratio.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate f at the subset indicated by --x (0/1 vector).
    Eval,
    /// Evaluate the Lovász extension at --x.
    Lovasz,
    /// Evaluate the multilinear extension at --x (exact, or sampled with --samples).
    Multilinear,
    /// Exact convex and concave closures at --x (n <= 12).
    Closure,
    /// Brute-force check of the instance's declared properties.
    Check,
    /// Minimize the function over all subsets.
    Sfm,
    /// Maximize a monotone function over a matroid (continuous greedy + pipage).
    Maxmatroid,
    /// Minimize a symmetric function over nonempty sets of size at most k.
    Cardmin,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let non_certified = report.result.certified == Some(false);
            if let Err(e) = emit(&cli, &report) {
                eprintln!("{e}");
                return std::process::ExitCode::from(2);
            }
            if non_certified {
                eprintln!("result is not certified (budget exhausted before convergence)");
                return std::process::ExitCode::from(3);
            }
            std::process::ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let ctx = Context::load(cli)?;
    match cli.command {
        Command::Eval => commands::eval(cli, &ctx),
        Command::Lovasz => commands::lovasz(cli, &ctx),
        Command::Multilinear => commands::multilinear(cli, &ctx),
        Command::Closure => commands::closure(cli, &ctx),
        Command::Check => commands::check(cli, &ctx),
        Command::Sfm => commands::sfm(cli, &ctx),
        Command::Maxmatroid => commands::maxmatroid(cli, &ctx),
        Command::Cardmin => commands::cardmin(cli, &ctx),
    }
}

fn emit(cli: &Cli, report: &RunReport) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Contract(format!("serialization failed: {e}")))?;
    match cli.json.as_deref() {
        None | Some("-") => println!("{json}"),
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {path}: {e}")))?,
    }
    Ok(())
}
