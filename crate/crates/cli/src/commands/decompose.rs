use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use simgroup::decomposition::{eemd_with_stats, emd_with_stats, find_extrema, BoundaryMode, EemdConfig, SiftConfig};
use simgroup::series::{columns_to_csv, count_zero_crossings};
use simgroup::{Decomposition, RngSeed};

use crate::error::{CliError, Context};
use crate::io::{load_series, parse_column, write_atomic, write_json};
use crate::Globals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Emd,
    Eemd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Boundary {
    Mirror,
    Clamp,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Input CSV file.
    pub input: PathBuf,
    /// Value column: 1-based position or header name.
    #[arg(long)]
    pub column: Option<String>,
    /// Treat the first row as data.
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, value_enum, default_value = "emd")]
    pub method: Method,
    #[arg(long)]
    pub sd_threshold: Option<f64>,
    #[arg(long)]
    pub max_sift: Option<usize>,
    #[arg(long)]
    pub max_imfs: Option<usize>,
    #[arg(long, value_enum)]
    pub boundary: Option<Boundary>,
    /// EEMD trial count.
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// EEMD noise amplitude as a fraction of the input standard deviation.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Serialize)]
struct ImfSummary {
    imf: usize,
    zero_crossings: usize,
    extrema: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
}

#[derive(Serialize)]
struct DecomposeReport {
    method: Method,
    length: usize,
    imf_count: usize,
    imfs: Vec<ImfSummary>,
    max_reconstruction_error: f64,
    sift: SiftConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    eemd: Option<EemdSummary>,
}

#[derive(Serialize)]
struct EemdSummary {
    ensemble_size: usize,
    noise_amplitude: f64,
    seed: RngSeed,
    unconverged_trial_imfs: usize,
}

pub fn run(args: &DecomposeArgs, globals: &Globals) -> Result<(), CliError> {
    let series = load_series(&args.input, args.column.as_deref().map(parse_column), args.no_header.then_some(false))?;
    let defaults = SiftConfig::default();
    let sift = SiftConfig {
        sd_threshold: args.sd_threshold.unwrap_or(defaults.sd_threshold),
        max_sift_iterations: args.max_sift.unwrap_or(defaults.max_sift_iterations),
        max_imfs: args.max_imfs.unwrap_or(defaults.max_imfs),
        boundary_mode: match args.boundary {
            Some(Boundary::Clamp) => BoundaryMode::Clamp,
            Some(Boundary::Mirror) => BoundaryMode::Mirror,
            None => defaults.boundary_mode,
        },
    };
    if args.method == Method::Emd && (args.ensemble.is_some() || args.noise.is_some()) {
        return Err(CliError::Usage("--ensemble and --noise apply to --method eemd only".into()));
    }

    let (decomposition, stats, eemd) = match args.method {
        Method::Emd => {
            let out = emd_with_stats(&series, &sift).context("EMD")?;
            (out.decomposition, Some(out.stats), None)
        }
        Method::Eemd => {
            let defaults = EemdConfig::default();
            let cfg = EemdConfig {
                sift: sift.clone(),
                ensemble_size: args.ensemble.unwrap_or(defaults.ensemble_size),
                noise_amplitude: args.noise.unwrap_or(defaults.noise_amplitude),
                seed: globals.seed.map_or(defaults.seed, RngSeed),
            };
            let out = eemd_with_stats(&series, &cfg).context("EEMD")?;
            let unconverged = out.trial_stats.iter().flatten().filter(|s| !s.converged).count();
            let summary = EemdSummary {
                ensemble_size: cfg.ensemble_size,
                noise_amplitude: cfg.noise_amplitude,
                seed: cfg.seed,
                unconverged_trial_imfs: unconverged,
            };
            (out.decomposition, None, Some(summary))
        }
    };

    let imfs = summarize(&decomposition, stats.as_deref())?;
    let max_reconstruction_error = decomposition
        .reconstruct()
        .iter()
        .zip(series.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let report = DecomposeReport {
        method: args.method,
        length: series.len(),
        imf_count: decomposition.imf_count(),
        imfs,
        max_reconstruction_error,
        sift,
        eemd,
    };

    let out = globals.out_dir(None);
    let mut headers: Vec<String> = (1..=decomposition.imf_count()).map(|i| format!("imf_{i}")).collect();
    headers.push("residual".into());
    let columns: Vec<&[f64]> = decomposition.components().collect();
    write_atomic(&out.join("components.csv"), columns_to_csv(&headers, &columns).as_bytes())?;
    write_json(&out.join("decomposition.json"), &report)?;

    if report.imf_count == 0 {
        println!("0 IMFs, residual only");
    } else {
        println!("{} IMFs", report.imf_count);
        for s in &report.imfs {
            println!("imf_{}: {} zero crossings", s.imf, s.zero_crossings);
        }
    }
    Ok(())
}

fn summarize(d: &Decomposition, stats: Option<&[simgroup::decomposition::ImfStats]>) -> Result<Vec<ImfSummary>, CliError> {
    d.imfs()
        .iter()
        .enumerate()
        .map(|(i, imf)| {
            let extrema = if imf.len() >= 3 {
                find_extrema(imf).context("counting extrema")?.extrema_count()
            } else {
                0
            };
            let s = stats.and_then(|s| s.get(i));
            Ok(ImfSummary {
                imf: i + 1,
                zero_crossings: count_zero_crossings(imf),
                extrema,
                iterations: s.map(|s| s.iterations),
                sd: s.map(|s| s.sd),
                converged: s.map(|s| s.converged),
            })
        })
        .collect()
}
