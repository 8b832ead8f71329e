use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use simgroup::pipeline::{run_framework, ForecastResult, GroupStep};
use simgroup::series::columns_to_csv;
use simgroup::{RngSeed, TimeSeries};

use crate::config::LoadedConfig;
use crate::error::{CliError, Context};
use crate::io::{write_atomic, write_json};
use crate::Globals;

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Run configuration (JSON).
    pub config: PathBuf,
    /// Steps ahead; overrides every framework's horizon.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Also write the per-step similarity groups.
    #[arg(long)]
    pub dump_groups: bool,
}

#[derive(Serialize)]
struct LabeledForecast<'a> {
    label: String,
    result: &'a ForecastResult,
}

#[derive(Serialize)]
struct PredictReport<'a> {
    series_length: usize,
    time: &'a [f64],
    forecasts: Vec<LabeledForecast<'a>>,
}

#[derive(Serialize)]
struct ComponentGroups<'a> {
    component: usize,
    steps: &'a [GroupStep],
}

#[derive(Serialize)]
struct FrameworkGroups<'a> {
    label: String,
    components: Vec<ComponentGroups<'a>>,
}

pub fn run(args: &PredictArgs, globals: &Globals) -> Result<(), CliError> {
    let cfg = LoadedConfig::load(&args.config)?;
    if args.horizon == Some(0) {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    let series = cfg.load_dataset()?;
    let seed = globals.seed.map(RngSeed).or(cfg.config.seed);
    let specs: Vec<_> = cfg
        .config
        .frameworks
        .iter()
        .map(|spec| {
            let mut spec = match seed {
                Some(seed) => spec.reseeded(seed),
                None => spec.clone(),
            };
            if let Some(h) = args.horizon {
                spec.horizon = h;
            }
            spec
        })
        .collect();
    let horizon = specs[0].horizon;
    if specs.iter().any(|s| s.horizon != horizon) {
        return Err(cfg.invalid("all frameworks must share one horizon (or pass --horizon)"));
    }

    let mut results = Vec::with_capacity(specs.len());
    for spec in &specs {
        let label = format!("{}/{}", spec.variant.label(), spec.predictor.kind);
        let result = run_framework(&series, spec).context(format!("predict {label}"))?;
        log::info!("{label}: {:?}", result.elapsed);
        results.push((label, result));
    }

    let time = forecast_times(&series, horizon);
    let out = globals.out_dir(cfg.output_dir());
    let stripped: Vec<ForecastResult> = results.iter().map(|(_, r)| r.without_groups()).collect();
    let report = PredictReport {
        series_length: series.len(),
        time: &time,
        forecasts: results
            .iter()
            .zip(&stripped)
            .map(|((label, _), result)| LabeledForecast {
                label: label.clone(),
                result,
            })
            .collect(),
    };
    write_json(&out.join("forecast.json"), &report)?;

    let mut headers = vec!["time".to_string()];
    headers.extend(results.iter().map(|(l, _)| l.clone()));
    let mut columns: Vec<&[f64]> = vec![&time];
    columns.extend(results.iter().map(|(_, r)| r.combined.as_slice()));
    write_atomic(&out.join("forecast.csv"), columns_to_csv(&headers, &columns).as_bytes())?;

    if args.dump_groups {
        let groups: Vec<FrameworkGroups> = results
            .iter()
            .map(|(label, r)| FrameworkGroups {
                label: label.clone(),
                components: r
                    .groups()
                    .into_iter()
                    .map(|(component, steps)| ComponentGroups { component, steps })
                    .collect(),
            })
            .collect();
        write_json(&out.join("groups.json"), &groups)?;
    }

    for (label, r) in &results {
        let values: Vec<String> = r.combined.iter().map(|v| format!("{v:.4}")).collect();
        println!("{label}: {}", values.join(" "));
    }
    Ok(())
}

/// Continues integer labels (years, time indices) when the series has
/// them, otherwise numbers the forecasts after the last 1-based position.
fn forecast_times(series: &TimeSeries, horizon: usize) -> Vec<f64> {
    let start = series
        .labels()
        .and_then(|l| l.last())
        .and_then(|l| l.parse::<i64>().ok())
        .map_or(series.len() as f64, |v| v as f64);
    (1..=horizon).map(|h| start + h as f64).collect()
}
