//! `simgroup`: decompose, align, forecast and benchmark time series from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numeric failure.

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{benchmark, decompose, dtw, gradcheck, predict};
use error::{CliError, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "simgroup", version, about = "Decomposition and similarity-grouping forecasts")]
struct Cli {
    /// Base seed; overrides seeds from config files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a series into IMFs and a residual.
    Decompose(decompose::DecomposeArgs),
    /// DTW distance between two series.
    Dtw(dtw::DtwArgs),
    /// Forecast with the frameworks in a config file.
    Predict(predict::PredictArgs),
    /// Compare frameworks over repeated seeded runs.
    Benchmark(benchmark::BenchmarkArgs),
    /// Compare analytic and finite-difference gradients.
    Gradcheck(gradcheck::GradcheckArgs),
}

pub struct Globals {
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl Globals {
    /// `--out`, else the configured directory, else `./out`.
    pub fn out_dir(&self, configured: Option<PathBuf>) -> PathBuf {
        io::output_dir(self.out.as_deref(), configured)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let globals = Globals {
        seed: cli.seed,
        out: cli.out,
    };
    match &cli.command {
        Command::Decompose(args) => decompose::run(args, &globals),
        Command::Dtw(args) => dtw::run(args),
        Command::Predict(args) => predict::run(args, &globals),
        Command::Benchmark(args) => benchmark::run(args, &globals),
        Command::Gradcheck(args) => gradcheck::run(args, &globals),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

