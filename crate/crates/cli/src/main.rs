//! `uncontrol`: estimators, closed forms, bounds and sweeps for the
//! ε-uncontrollability of GOE-driven linear systems.
//!
//! Exit codes: 0 success, 2 argument error, 3 numerical failure.

mod commands;
mod grid;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "uncontrol",
    version,
    about = "Epsilon-uncontrollability of random linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    PerB,
    Integral,
    Poly,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Base seed; defaults to $UNCONTROL_SEED, then 0.
    #[arg(long, env = "UNCONTROL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct TolArg {
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo estimate of P_ε (or P_{ε,b} with --b).
    Estimate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        /// Fixed input vector, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        b: Option<Vec<f64>>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact n = 2 values: P_ε, or P_{ε,b} with --b-norm.
    Exact2 {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        b_norm: Option<f64>,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Upper bounds on P_{ε,b} (per-b) or P_ε (integral, poly).
    Bound {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        b_norm: Option<f64>,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact spherical cap measure with its upper and lower bounds.
    Caps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        height: f64,
        /// Also estimate the measure by simulation.
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bounds, exact values and estimates over an (n, ε) grid.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        n_list: Vec<usize>,
        /// start:stop:step, inclusive of stop.
        #[arg(long, default_value = "0:0.5:0.01")]
        eps_grid: String,
        /// Trials per grid point; 0 disables estimation.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        tol: TolArg,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Growth-rate bound at ε = 0 for n = 2..n-max.
    Growth {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    // exit codes are limited to 0, 2 and 3, so an internal panic maps to 3
    match std::panic::catch_unwind(|| commands::run(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(commands::EXIT_NUMERICAL),
    }
}
