//! Relative-error scoring and the repeated-run benchmark.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pipeline::{run_framework, FrameworkSpec, Variant};
use crate::predictors::PredictorKind;
use crate::series::{RngSeed, TimeSeries};

/// `|y - ŷ| / y`. Negative actuals divide by `|y|`.
pub fn relative_error(actual: f64, predicted: f64) -> Result<f64> {
    if actual == 0.0 {
        return Err(Error::ZeroActual);
    }
    Ok((actual - predicted).abs() / actual.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub actual: f64,
    pub predicted: f64,
    pub re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunEvaluation {
    pub per_point: Vec<PointError>,
    pub mean_re: f64,
    /// Set when some actual was negative and `|y|` was used as denominator.
    pub negative_actuals: bool,
}

pub fn evaluate_run(actuals: &[f64], predictions: &[f64]) -> Result<RunEvaluation> {
    if actuals.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: actuals.len(),
            right: predictions.len(),
        });
    }
    if actuals.is_empty() {
        return Err(Error::EmptySeries);
    }
    let per_point = actuals
        .iter()
        .zip(predictions)
        .map(|(&actual, &predicted)| {
            Ok(PointError {
                actual,
                predicted,
                re: relative_error(actual, predicted)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean_re = per_point.iter().map(|p| p.re).sum::<f64>() / per_point.len() as f64;
    Ok(RunEvaluation {
        per_point,
        mean_re,
        negative_actuals: actuals.iter().any(|&a| a < 0.0),
    })
}

/// One seeded run of one framework.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: RngSeed,
    pub predictions: Vec<f64>,
    pub evaluation: RunEvaluation,
}

/// Per-time-point statistics across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub actual: f64,
    pub predicted_mean: f64,
    pub predicted_std: f64,
    pub re_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub label: String,
    pub variant: Variant,
    pub predictor: PredictorKind,
    pub runs: Vec<RunRecord>,
    pub per_point: Vec<PointSummary>,
    /// Mean over runs of each run's mean RE.
    pub re_mean_over_runs: f64,
    /// Population standard deviation of the per-run mean RE.
    pub re_std_over_runs: f64,
}

/// Arithmetic mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl EvalReport {
    fn aggregate(label: String, spec: &FrameworkSpec, actuals: &[f64], runs: Vec<RunRecord>) -> EvalReport {
        let per_point = actuals
            .iter()
            .enumerate()
            .map(|(t, &actual)| {
                let preds: Vec<f64> = runs.iter().map(|r| r.predictions[t]).collect();
                let res: Vec<f64> = runs.iter().map(|r| r.evaluation.per_point[t].re).collect();
                let (predicted_mean, predicted_std) = mean_std(&preds);
                PointSummary {
                    actual,
                    predicted_mean,
                    predicted_std,
                    re_mean: mean_std(&res).0,
                }
            })
            .collect();
        let means: Vec<f64> = runs.iter().map(|r| r.evaluation.mean_re).collect();
        let (re_mean_over_runs, re_std_over_runs) = mean_std(&means);
        EvalReport {
            label,
            variant: spec.variant,
            predictor: spec.predictor.kind,
            runs,
            per_point,
            re_mean_over_runs,
            re_std_over_runs,
        }
    }
}

/// Trains every framework on `series[..holdout]`, forecasts the remaining
/// points once per seed, and scores each run. Reports come back in input
/// order.
pub fn benchmark(
    series: &TimeSeries,
    holdout: usize,
    specs: &[(String, FrameworkSpec)],
    seeds: &[RngSeed],
) -> Result<Vec<EvalReport>> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("benchmark needs at least one seed".into()));
    }
    if holdout >= series.len() {
        return Err(Error::InvalidParameter(format!(
            "holdout {holdout} leaves nothing to forecast in a series of length {}",
            series.len()
        )));
    }
    for (_, spec) in specs {
        let need = 2 * spec.grouping.segment_length;
        if holdout < need {
            return Err(Error::TooShort {
                required: need,
                actual: holdout,
            });
        }
    }
    let train = series.head(holdout)?;
    let actuals = &series.values()[holdout..];
    let horizon = actuals.len();

    let jobs: Vec<(usize, RngSeed)> = (0..specs.len())
        .flat_map(|s| seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(s, seed)| {
            let mut spec = specs[s].1.reseeded(seed);
            spec.horizon = horizon;
            let result = run_framework(&train, &spec)?;
            let evaluation = evaluate_run(actuals, &result.combined)?;
            Ok(RunRecord {
                seed,
                predictions: result.combined,
                evaluation,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut records = records.into_iter();
    Ok(specs
        .iter()
        .map(|(label, spec)| {
            let runs = records.by_ref().take(seeds.len()).collect();
            EvalReport::aggregate(label.clone(), spec, actuals, runs)
        })
        .collect())
}

/// Comparison table: an `Actual` row, then one row per report with the
/// mean and std of each point's prediction and of the run-mean RE.
pub fn reports_to_csv(reports: &[EvalReport], point_labels: &[String]) -> String {
    let mut out = String::from("framework,predictor");
    for label in point_labels {
        let _ = write!(out, ",{label}_mean,{label}_std");
    }
    out.push_str(",re_mean,re_std\n");
    if let Some(first) = reports.first() {
        out.push_str("Actual,");
        for p in &first.per_point {
            let _ = write!(out, ",{},", p.actual);
        }
        out.push_str(",,\n");
    }
    for r in reports {
        let _ = write!(out, "{},{}", r.label, r.predictor);
        for p in &r.per_point {
            let _ = write!(out, ",{},{}", p.predicted_mean, p.predicted_std);
        }
        let _ = writeln!(out, ",{},{}", r.re_mean_over_runs, r.re_std_over_runs);
    }
    out
}

/// Reports sorted by mean RE (stable, so ties keep input order).
pub fn ranked(reports: &[EvalReport]) -> Vec<&EvalReport> {
    let mut v: Vec<&EvalReport> = reports.iter().collect();
    v.sort_by(|a, b| a.re_mean_over_runs.total_cmp(&b.re_mean_over_runs));
    v
}
