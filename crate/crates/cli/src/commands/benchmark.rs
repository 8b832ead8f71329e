use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use simgroup::evaluation::{benchmark, ranked, reports_to_csv, EvalReport};
use simgroup::pipeline::FrameworkSpec;
use simgroup::RngSeed;

use crate::config::LoadedConfig;
use crate::error::{CliError, Context};
use crate::io::{write_atomic, write_json};
use crate::Globals;

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Run configuration (JSON) listing at least two frameworks.
    pub config: PathBuf,
    /// Number of seeded runs per framework.
    #[arg(long)]
    pub runs: Option<usize>,
}

#[derive(Serialize)]
struct BenchmarkReport<'a> {
    holdout: usize,
    horizon: usize,
    seeds: &'a [RngSeed],
    /// Standard deviations are population standard deviations over runs.
    reports: &'a [EvalReport],
}

pub fn run(args: &BenchmarkArgs, globals: &Globals) -> Result<(), CliError> {
    let cfg = LoadedConfig::load(&args.config)?;
    if cfg.config.frameworks.len() < 2 {
        return Err(cfg.invalid("benchmark needs at least two frameworks"));
    }
    let holdout = cfg
        .config
        .holdout
        .ok_or_else(|| cfg.invalid("benchmark needs a holdout (training prefix length)"))?;
    let seeds = cfg.benchmark_seeds(globals.seed, args.runs)?;
    let series = cfg.load_dataset()?;

    let specs: Vec<(String, FrameworkSpec)> = cfg
        .config
        .frameworks
        .iter()
        .map(|s| (s.variant.label().to_string(), s.clone()))
        .collect();
    let reports = benchmark(&series, holdout, &specs, &seeds).context("benchmark")?;

    let point_labels: Vec<String> = match series.labels() {
        Some(labels) => labels[holdout..].to_vec(),
        None => (holdout + 1..=series.len()).map(|t| t.to_string()).collect(),
    };
    let out = globals.out_dir(cfg.output_dir());
    write_atomic(&out.join("benchmark.csv"), reports_to_csv(&reports, &point_labels).as_bytes())?;
    write_json(
        &out.join("benchmark.json"),
        &BenchmarkReport {
            holdout,
            horizon: series.len() - holdout,
            seeds: &seeds,
            reports: &reports,
        },
    )?;

    println!("rank  framework     predictor  mean_re   std_re");
    for (i, r) in ranked(&reports).iter().enumerate() {
        println!(
            "{:<5} {:<13} {:<10} {:<9.6} {:.6}",
            i + 1,
            r.label,
            r.predictor.to_string(),
            r.re_mean_over_runs,
            r.re_std_over_runs
        );
    }
    Ok(())
}
