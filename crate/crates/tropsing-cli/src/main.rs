//! `tropsing`: JSON front end to the sparse singularity engines.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a result contradicts
//! a claim it was checked against. Results go to stdout even on exit 3.

mod commands;
mod failure;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use commands::Output;
use failure::{Failure, EXIT_INCONSISTENCY, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "tropsing", version, about = "Exact invariants of sparse curve singularities")]
struct Cli {
    /// Wrap the result in a run report with inputs, warnings and timing.
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// δ-invariant of the germ `t -> (f1, f2)` with supports B1, B2.
    Delta {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        /// JSON `{"f1": {"b": [num, den]}, "f2": {...}}`.
        #[arg(long)]
        coeffs: Option<String>,
        /// Also compute δ as half an intersection number.
        #[arg(long)]
        oracle: bool,
    },
    /// Singular strata of the sparse resultant.
    Strata {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        /// Attach the standard-triangle census count to every stratum.
        #[arg(long)]
        cross_check: bool,
    },
    /// Singularity census of the projected space curve.
    Project {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
    },
    /// Newton polygon of the projected curve.
    Newton {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
    },
    /// Tangency matrices and the δ-sum of the space curve.
    Utrop {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        /// Restrict to one tropical direction `dx,dy`.
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
    },
    /// Search for counterexamples to the Vandermonde splitting statement.
    VdmSweep {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_order: u64,
        #[arg(long)]
        max_exp: i64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Criterion numbers to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a Command,
    seed: u64,
    outputs: &'a Value,
    warnings: &'a [String],
    timing_ms: u128,
}

fn dispatch(command: &Command, seed: u64) -> Result<Output, Failure> {
    match command {
        Command::Delta { b1, b2, coeffs, oracle } => commands::delta(b1, b2, coeffs.as_deref(), *oracle, seed),
        Command::Strata { b1, b2, cross_check } => commands::strata(b1, b2, *cross_check),
        Command::Project { a1, a2 } => commands::project(a1, a2),
        Command::Newton { a1, a2 } => commands::newton(a1, a2),
        Command::Utrop { a1, a2, dir } => commands::utrop(a1, a2, dir.as_deref()),
        Command::VdmSweep { k, max_order, max_exp, jobs } => commands::vdm_sweep(*k, *max_order, *max_exp, *jobs),
        Command::Selftest { only } => commands::selftest(only, seed),
    }
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("results serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            print_json(&Failure::input("UsageError", e.to_string()).to_json());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let seed = tropsing::acceptance::seed_from_env();
    let start = Instant::now();
    match dispatch(&cli.command, seed) {
        Ok(out) => {
            let timing_ms = start.elapsed().as_millis();
            let value = match &out.inconsistency {
                Some((kind, message)) => {
                    eprintln!("{kind}: {message}");
                    Failure::inconsistency(kind, message.clone(), Some(out.value.clone())).to_json()
                }
                None => out.value.clone(),
            };
            if cli.report {
                print_json(&RunReport { command: &cli.command, seed, outputs: &value, warnings: &out.warnings, timing_ms });
            } else {
                print_json(&value);
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
            }
            ExitCode::from(if out.inconsistency.is_some() { EXIT_INCONSISTENCY as u8 } else { 0 })
        }
        Err(f) => {
            eprintln!("{}: {}", f.kind, f.message);
            print_json(&f.to_json());
            ExitCode::from(f.code as u8)
        }
    }
}
