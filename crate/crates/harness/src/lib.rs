//! `bqlab`: configuration-driven runs of the Boussinesq laboratory.
//!
//! Subcommands `simulate`, `compare`, `painleve`, `rh-check` and `regions`.
//! Exit codes: 0 ok, 1 i/o, 2 config, 3 solver, 4 empty extraction window,
//! 5 pole, 6 identity-suite failure.

// `!(a < b)` also rejects NaN, which is the point in input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::painleve::PainleveArgs;
use commands::regions::RegionsArgs;
use commands::rh_check::RhCheckArgs;
use commands::Context;
pub use error::HarnessError;

#[derive(Debug, Parser)]
#[command(name = "bqlab", version, about = "Good/modified Boussinesq numerical laboratory")]
pub struct Cli {
    /// Run configuration (simulate, compare).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides output.dir.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Suppress progress and tables.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured simulation and write a snapshot per output time.
    Simulate,
    /// Compare snapshots with the Painleve-region asymptotics.
    Compare,
    /// Integrate a Painleve IV solution seeded from its y -> -inf asymptotics.
    Painleve(PainleveFlags),
    /// Run the Riemann-Hilbert identity suites.
    RhCheck(RhCheckFlags),
    /// Tabulate the region boundaries.
    Regions(RegionsFlags),
}

#[derive(Debug, Args)]
pub struct PainleveFlags {
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long = "arg-s", default_value_t = 0.0, allow_hyphen_values = true)]
    pub arg_s: f64,
    #[arg(long = "y-seed", default_value_t = -40.0, allow_hyphen_values = true)]
    pub y_seed: f64,
    #[arg(long = "y-end", default_value_t = 0.0, allow_hyphen_values = true)]
    pub y_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Second seed point; reports the discrepancy on the overlap.
    #[arg(long = "compare-seed", allow_hyphen_values = true)]
    pub compare_seed: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RhCheckFlags {
    /// zero | gaussian | bump
    #[arg(long, default_value = "gaussian")]
    pub preset: String,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub amplitude: f64,
    /// Sample points per suite.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RegionsFlags {
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c2: f64,
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    pub c3: f64,
    #[arg(long = "t-min", default_value_t = 1.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long = "t-max", default_value_t = 1000.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Explicit comma-separated times instead of the sampled range.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub times: Vec<f64>,
}

pub fn run(cli: Cli) -> Result<(), HarnessError> {
    let ctx = Context {
        config: cli.config,
        out: cli.out,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Simulate => commands::simulate::cmd_simulate(&ctx),
        Command::Compare => commands::compare::cmd_compare(&ctx),
        Command::Painleve(f) => commands::painleve::cmd_painleve(
            &ctx,
            &PainleveArgs {
                a: f.a,
                arg_s: f.arg_s,
                y_seed: f.y_seed,
                y_end: f.y_end,
                tol: f.tol,
                compare_seed: f.compare_seed,
            },
        ),
        Command::RhCheck(f) => commands::rh_check::cmd_rh_check(
            &ctx,
            &RhCheckArgs {
                preset: f.preset,
                amplitude: f.amplitude,
                samples: f.samples,
            },
        ),
        Command::Regions(f) => commands::regions::cmd_regions(
            &ctx,
            &RegionsArgs {
                c1: f.c1,
                c2: f.c2,
                c3: f.c3,
                t_min: f.t_min,
                t_max: f.t_max,
                samples: f.samples,
                times: f.times,
            },
        ),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bqlab: {e}");
            e.exit_code()
        }
    }
}
