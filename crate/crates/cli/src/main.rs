//! `rcp`: analyze, synthesize and verify affine feedback for reach control on
//! simplices.
//!
//! Exit codes: 0 feasible or pass, 2 obstructed or failed check, 3 vacuous,
//! 1 error.

mod batch;
mod commands;
mod io;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rcp_core::{CaseTag, Tolerances};

#[derive(Parser)]
#[command(name = "rcp", version, about = "Reach control on simplices: obstruction analysis and affine feedback synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Numeric {
    /// Exact rational arithmetic (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Double-precision arithmetic with named tolerances.
    #[arg(long)]
    float: bool,
    /// Tolerance override `name=value` (bary, rank, solve, feas, strict, geo,
    /// indep, nonzero, lp). Applied after RCP_TOL_* environment variables.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

impl Numeric {
    fn tolerances(&self) -> Result<Tolerances, String> {
        let mut tol = Tolerances::default().with_env_overrides()?;
        for spec in &self.tol {
            tol.set_from_str(spec)?;
        }
        Ok(tol)
    }
}

#[derive(Args, Clone)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Omit wall-clock timings so output is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the instance and decide the cone condition.
    Analyze {
        instance: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        output: Output,
    },
    /// Run the full pipeline and emit a certified law when one exists.
    Synthesize {
        instance: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        output: Output,
        /// Skip the constant-law shortcut in arms that never need it.
        #[arg(long)]
        no_constant: bool,
    },
    /// Check a law (taken from a synthesis report) against an instance.
    Verify {
        instance: PathBuf,
        law: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        output: Output,
        /// Number of sampled points for the redundant sampling check.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a random instance with a given case tag.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
        n: u64,
        #[arg(long, value_parser = parse_tag)]
        case: CaseTag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Synthesize every `*.json` instance in a directory and write a CSV summary.
    Batch {
        dir: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        numeric: Numeric,
        /// Summary CSV path (default: stdout).
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Also write one report per instance into this directory.
        #[arg(long, value_name = "DIR")]
        reports: Option<PathBuf>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Render an instance and its report as SVG.
    Plot {
        instance: PathBuf,
        report: PathBuf,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn parse_tag(s: &str) -> Result<CaseTag, String> {
    s.parse::<CaseTag>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Analyze {
            instance,
            numeric,
            output,
        } => {
            let tol = numeric.tolerances()?;
            let (text, code) = commands::analyze(&instance, numeric.float, &tol, !output.no_timing)?;
            io::emit(output.output.as_deref(), &text)?;
            Ok(code)
        }
        Command::Synthesize {
            instance,
            numeric,
            output,
            no_constant,
        } => {
            let tol = numeric.tolerances()?;
            let (text, code) = commands::synthesize(&instance, numeric.float, &tol, !no_constant, !output.no_timing)?;
            io::emit(output.output.as_deref(), &text)?;
            Ok(code)
        }
        Command::Verify {
            instance,
            law,
            numeric,
            output,
            samples,
            seed,
        } => {
            let tol = numeric.tolerances()?;
            let (text, code) = commands::verify(&instance, &law, numeric.float, &tol, samples, seed)?;
            io::emit(output.output.as_deref(), &text)?;
            Ok(code)
        }
        Command::Gen { n, case, seed, output } => {
            let inst = rcp_core::gen::generate(n as usize, case, seed).map_err(|e| e.to_string())?;
            io::emit(output.as_deref(), &inst.to_json())?;
            Ok(commands::EXIT_OK)
        }
        Command::Batch {
            dir,
            jobs,
            numeric,
            output,
            reports,
            no_timing,
        } => {
            let tol = numeric.tolerances()?;
            let options = batch::BatchOptions {
                jobs,
                float: numeric.float,
                tolerances: tol,
                reports,
                timing: !no_timing,
            };
            let csv = batch::run(&dir, &options)?;
            io::emit(output.as_deref(), &csv)?;
            Ok(commands::EXIT_OK)
        }
        Command::Plot {
            instance,
            report,
            output,
        } => {
            let svg = plot::render(&instance, &report)?;
            io::emit(output.as_deref(), &svg)?;
            Ok(commands::EXIT_OK)
        }
    }
}
