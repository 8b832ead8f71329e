//! The four forecasting frameworks: plain NN, EMD+NN, EMD+DTW+NN and
//! EEMD+DTW+NN.
//!
//! Decomposed variants forecast every component separately and sum the
//! per-component forecasts. High-frequency components are forecast from
//! DTW-grouped training sets, the rest from sliding windows. Multi-step
//! forecasts are recursive: each prediction is appended to the component
//! before the next step, and grouping is redone at every step.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{eemd, emd, EemdConfig, SiftConfig};
use crate::error::{Error, Result};
use crate::grouping::{group_for_next, GroupingConfig, Provenance, TrainingSet};
use crate::predictors::{train, PredictorConfig, PredictorKind, TrainedModel};
use crate::series::{count_zero_crossings, Decomposition, FrequencySplit, RngSeed, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "NN")]
    Nn,
    #[serde(rename = "EMD_NN")]
    EmdNn,
    #[serde(rename = "EMD_DTW_NN")]
    EmdDtwNn,
    #[serde(rename = "EEMD_DTW_NN")]
    EemdDtwNn,
}

impl Variant {
    /// Presentation order used in comparison tables.
    pub const ALL: [Variant; 4] = [Variant::Nn, Variant::EmdNn, Variant::EmdDtwNn, Variant::EemdDtwNn];

    pub fn label(self) -> &'static str {
        match self {
            Variant::Nn => "NN",
            Variant::EmdNn => "EMD+NN",
            Variant::EmdDtwNn => "EMD+DTW+NN",
            Variant::EemdDtwNn => "EEMD+DTW+NN",
        }
    }

    pub fn rank(self) -> usize {
        Variant::ALL.iter().position(|v| *v == self).unwrap_or(usize::MAX)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoSplit {
    Auto,
}

/// Number of high (P) and low (Q) components, or the zero-crossing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SplitRule {
    Explicit([usize; 2]),
    Auto(AutoSplit),
}

impl Default for SplitRule {
    fn default() -> Self {
        SplitRule::Auto(AutoSplit::Auto)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkSpec {
    pub variant: Variant,
    #[serde(default)]
    pub predictor: PredictorConfig,
    #[serde(default)]
    pub sift: SiftConfig,
    /// EEMD variant only. Its `sift` block is replaced by the framework's `sift`.
    #[serde(default)]
    pub eemd: EemdConfig,
    #[serde(default)]
    pub split: SplitRule,
    #[serde(default)]
    pub grouping: GroupingConfig,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

fn default_horizon() -> usize {
    1
}

impl FrameworkSpec {
    pub fn new(variant: Variant) -> Self {
        FrameworkSpec {
            variant,
            predictor: PredictorConfig::default(),
            sift: SiftConfig::default(),
            eemd: EemdConfig::default(),
            split: SplitRule::default(),
            grouping: GroupingConfig::default(),
            horizon: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        self.predictor.validate()?;
        self.sift.validate()?;
        self.grouping.validate()?;
        if self.variant == Variant::EemdDtwNn {
            self.eemd_config().validate()?;
        }
        if let SplitRule::Explicit([_, q]) = self.split {
            if q == 0 {
                return Err(Error::InvalidParameter("Q must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn eemd_config(&self) -> EemdConfig {
        EemdConfig {
            sift: self.sift.clone(),
            ..self.eemd.clone()
        }
    }

    /// Same spec with every stochastic stage reseeded from `seed`.
    pub fn reseeded(&self, seed: RngSeed) -> FrameworkSpec {
        let mut spec = self.clone();
        spec.predictor.seed = seed;
        spec.eemd.seed = seed;
        spec
    }
}

/// Splits the N + 1 components: the first P are high-frequency, the rest
/// (residual last) low-frequency.
///
/// The automatic rule counts the IMFs with more than `T / 4` zero crossings,
/// with at least one high component whenever any IMF exists.
pub fn split_components(d: &Decomposition, rule: SplitRule) -> Result<FrequencySplit> {
    let total = d.imf_count() + 1;
    let p = match rule {
        SplitRule::Explicit([p, q]) => {
            if p + q != total || q == 0 {
                return Err(Error::InconsistentSplit { p, q, expected: total });
            }
            p
        }
        SplitRule::Auto(_) => {
            let limit = d.source_length() as f64 / 4.0;
            let fast = d
                .imfs()
                .iter()
                .filter(|imf| count_zero_crossings(imf) as f64 > limit)
                .count();
            if d.imf_count() > 0 {
                fast.max(1)
            } else {
                0
            }
        }
    };
    let components: Vec<Vec<f64>> = d.components().map(<[f64]>::to_vec).collect();
    let (high, low) = components.split_at(p);
    Ok(FrequencySplit {
        high: high.to_vec(),
        low: low.to_vec(),
    })
}

/// Runs `model` over `set` in source order (building ENN context), then
/// predicts from `query`.
fn predict_after(model: &TrainedModel, set: &TrainingSet, query: &[f64]) -> Result<f64> {
    let mut session = model.session();
    if model.kind == PredictorKind::Enn {
        let mut order: Vec<usize> = (0..set.len()).collect();
        order.sort_by_key(|&i| set.provenance.get(i).map_or(i, |p| p.start));
        for i in order {
            session.step(&set.inputs[i])?;
        }
    }
    session.step(query)
}

/// Sliding-window model on the whole component, then a recursive forecast.
pub fn forecast_low(component: &[f64], cfg: &PredictorConfig, window: usize, horizon: usize) -> Result<Vec<f64>> {
    if component.len() <= window {
        return Err(Error::TooShort {
            required: window + 1,
            actual: component.len(),
        });
    }
    let set = TrainingSet::sliding(component, window)?;
    let model = train(&set, cfg)?;
    let mut session = model.session();
    if model.kind == PredictorKind::Enn {
        for x in &set.inputs {
            session.step(x)?;
        }
    }
    let mut history = component.to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let y = session.step(&history[history.len() - window..])?;
        history.push(y);
        out.push(y);
    }
    Ok(out)
}

/// Grouping record for one recursive step of a high-frequency forecast.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStep {
    pub step: usize,
    pub reference_start: usize,
    pub reference: Vec<f64>,
    pub members: Vec<Provenance>,
    pub prediction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighForecast {
    pub values: Vec<f64>,
    pub steps: Vec<GroupStep>,
}

/// At each step: group the trailing window's most similar segments, train on
/// them, predict one value and append it.
pub fn forecast_high(
    component: &[f64],
    grouping: &GroupingConfig,
    cfg: &PredictorConfig,
    horizon: usize,
) -> Result<HighForecast> {
    grouping.validate()?;
    let l = grouping.segment_length;
    if component.len() < 2 * l {
        return Err(Error::TooShort {
            required: 2 * l,
            actual: component.len(),
        });
    }
    let mut history = component.to_vec();
    let mut values = Vec::with_capacity(horizon);
    let mut steps = Vec::with_capacity(horizon);
    for step in 0..horizon {
        let (set, reference) = group_for_next(&history, grouping)?;
        let model = train(&set, &cfg.with_seed(cfg.seed.derive(step as u64)))?;
        let y = predict_after(&model, &set, &reference.values)?;
        steps.push(GroupStep {
            step: step + 1,
            reference_start: reference.start,
            reference: reference.values,
            members: set.provenance,
            prediction: y,
        });
        history.push(y);
        values.push(y);
    }
    Ok(HighForecast { values, steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The undecomposed series (plain NN).
    Raw,
    High,
    Low,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentForecast {
    /// Position among the IMFs, residual last.
    pub index: usize,
    pub role: Role,
    pub seed: RngSeed,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupStep>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastResult {
    pub variant: Variant,
    pub predictor: PredictorKind,
    pub predictor_seed: RngSeed,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eemd_seed: Option<RngSeed>,
    pub imf_count: usize,
    /// (P, Q) for the grouped variants.
    pub split: Option<(usize, usize)>,
    pub combined: Vec<f64>,
    pub per_component: Vec<ComponentForecast>,
    /// Wall-clock time; left out of serialized output so files stay
    /// reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Component-order sum of the per-component forecasts.
pub fn combine(per_component: &[ComponentForecast], horizon: usize) -> Vec<f64> {
    let mut combined = vec![0.0; horizon];
    for (k, comp) in per_component.iter().enumerate() {
        for (c, v) in combined.iter_mut().zip(&comp.values) {
            *c = if k == 0 { *v } else { *c + v };
        }
    }
    combined
}

enum Plan {
    Low(Vec<f64>),
    High(Vec<f64>),
}

/// Decompose, forecast each component, and combine.
pub fn run_framework(series: &TimeSeries, spec: &FrameworkSpec) -> Result<ForecastResult> {
    spec.validate()?;
    let started = Instant::now();
    let window = spec.grouping.segment_length;
    let horizon = spec.horizon;

    let (decomposition, plans, split) = match spec.variant {
        Variant::Nn => (None, vec![(Role::Raw, Plan::Low(series.values().to_vec()))], None),
        Variant::EmdNn => {
            let d = emd(series, &spec.sift)?;
            let plans = d.components().map(|c| (Role::Low, Plan::Low(c.to_vec()))).collect();
            (Some(d), plans, None)
        }
        Variant::EmdDtwNn | Variant::EemdDtwNn => {
            let d = if spec.variant == Variant::EmdDtwNn {
                emd(series, &spec.sift)?
            } else {
                eemd(series, &spec.eemd_config())?
            };
            let split = split_components(&d, spec.split)?;
            let pq = (split.p_count(), split.q_count());
            let plans = split
                .high
                .into_iter()
                .map(|c| (Role::High, Plan::High(c)))
                .chain(split.low.into_iter().map(|c| (Role::Low, Plan::Low(c))))
                .collect();
            (Some(d), plans, Some(pq))
        }
    };

    let per_component = plans
        .into_par_iter()
        .enumerate()
        .map(|(index, (role, plan))| {
            let seed = spec.predictor.seed.derive(index as u64);
            let cfg = spec.predictor.with_seed(seed);
            let (values, groups) = match plan {
                Plan::Low(c) => (forecast_low(&c, &cfg, window, horizon), None),
                Plan::High(c) => match forecast_high(&c, &spec.grouping, &cfg, horizon) {
                    Ok(h) => (Ok(h.values), Some(h.steps)),
                    Err(e) => (Err(e), None),
                },
            };
            let values = values.map_err(|e| e.in_component(index))?;
            Ok(ComponentForecast {
                index,
                role,
                seed,
                values,
                groups,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok(ForecastResult {
        variant: spec.variant,
        predictor: spec.predictor.kind,
        predictor_seed: spec.predictor.seed,
        eemd_seed: (spec.variant == Variant::EemdDtwNn).then_some(spec.eemd.seed),
        imf_count: decomposition.as_ref().map_or(0, Decomposition::imf_count),
        split,
        combined: combine(&per_component, horizon),
        per_component,
        elapsed: started.elapsed(),
    })
}

impl ForecastResult {
    /// Copy without the per-step grouping records.
    pub fn without_groups(&self) -> ForecastResult {
        let mut out = self.clone();
        for c in &mut out.per_component {
            c.groups = None;
        }
        out
    }

    /// Grouping records of every high-frequency component.
    pub fn groups(&self) -> Vec<(usize, &[GroupStep])> {
        self.per_component
            .iter()
            .filter_map(|c| c.groups.as_deref().map(|g| (c.index, g)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn decomposition(imfs: usize) -> Decomposition {
        let t = 32;
        let imfs = (0..imfs)
            .map(|k| (0..t).map(|i| (i as f64 * (k + 1) as f64).sin()).collect())
            .collect();
        Decomposition::new(imfs, vec![1.0; t]).unwrap()
    }

    #[test]
    fn explicit_splits() {
        let d = decomposition(3);
        let s = split_components(&d, SplitRule::Explicit([1, 3])).unwrap();
        assert_eq!(s.high, vec![d.imfs()[0].clone()]);
        assert_eq!(s.low, vec![d.imfs()[1].clone(), d.imfs()[2].clone(), d.residual().to_vec()]);

        let d = decomposition(6);
        let s = split_components(&d, SplitRule::Explicit([3, 4])).unwrap();
        assert_eq!(s.high, d.imfs()[..3].to_vec());
        assert_eq!(s.low.len(), 4);
        assert_eq!(s.low[3], d.residual());
    }

    #[test]
    fn inconsistent_split() {
        let d = decomposition(3);
        match split_components(&d, SplitRule::Explicit([2, 3])) {
            Err(Error::InconsistentSplit { expected, .. }) => assert_eq!(expected, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_imfs_means_no_high_components() {
        let d = Decomposition::new(vec![], vec![1.0, 2.0, 3.0]).unwrap();
        let s = split_components(&d, SplitRule::default()).unwrap();
        assert_eq!(s.p_count(), 0);
        assert_eq!(s.low, vec![vec![1.0, 2.0, 3.0]]);
    }

    #[test]
    fn auto_split_counts_fast_imfs() {
        let t = 64;
        let fast: Vec<f64> = (0..t).map(|i| (PI * i as f64 / 2.0 + 0.3).sin()).collect();
        let slow: Vec<f64> = (0..t).map(|i| (2.0 * PI * i as f64 / 32.0 + 0.3).sin()).collect();
        assert!(count_zero_crossings(&fast) > t / 4);
        assert!(count_zero_crossings(&slow) <= t / 4);
        let d = Decomposition::new(vec![fast, slow], vec![0.0; t]).unwrap();
        assert_eq!(split_components(&d, SplitRule::default()).unwrap().p_count(), 1);

        // Slow-only IMFs still yield one high component.
        let slow: Vec<f64> = (0..t).map(|i| (2.0 * PI * i as f64 / 32.0).sin()).collect();
        let d = Decomposition::new(vec![slow], vec![0.0; t]).unwrap();
        assert_eq!(split_components(&d, SplitRule::default()).unwrap().p_count(), 1);
    }

    #[test]
    fn split_rule_json() {
        let auto: SplitRule = serde_json::from_str("\"auto\"").unwrap();
        assert_eq!(auto, SplitRule::default());
        let pq: SplitRule = serde_json::from_str("[3, 4]").unwrap();
        assert_eq!(pq, SplitRule::Explicit([3, 4]));
        assert!(serde_json::from_str::<SplitRule>("\"manual\"").is_err());
    }

    #[test]
    fn horizon_one_gives_one_value() {
        let c: Vec<f64> = (0..20).map(|t| (t as f64 * 0.7).sin()).collect();
        let out = forecast_low(&c, &PredictorConfig::default(), 4, 1).unwrap();
        assert_eq!(out.len(), 1);
        assert!(forecast_low(&c[..4], &PredictorConfig::default(), 4, 1).is_err());
    }

    #[test]
    fn constant_component_forecasts_the_constant() {
        let c = vec![2.5; 20];
        for kind in PredictorKind::ALL {
            let cfg = PredictorConfig {
                kind,
                ..Default::default()
            };
            for y in forecast_low(&c, &cfg, 4, 3).unwrap() {
                assert_eq!(y, 2.5, "{kind}");
            }
        }
    }

    #[test]
    fn high_forecast_needs_two_windows() {
        let c = vec![0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0];
        let g = GroupingConfig::default();
        assert!(matches!(
            forecast_high(&c, &g, &PredictorConfig::default(), 1),
            Err(Error::TooShort { required: 8, .. })
        ));
    }

    #[test]
    fn high_forecast_feeds_predictions_back() {
        let c: Vec<f64> = (0..40).map(|t| (2.0 * PI * t as f64 / 8.0).sin()).collect();
        let g = GroupingConfig::default();
        let out = forecast_high(&c, &g, &PredictorConfig::default(), 2).unwrap();
        assert_eq!(out.values.len(), 2);
        let second = &out.steps[1];
        assert_eq!(second.reference_start, c.len() + 1 - g.segment_length);
        assert_eq!(*second.reference.last().unwrap(), out.values[0]);
    }

    #[test]
    fn duplicate_segment_with_k1_grnn() {
        // Period-5 pattern: the trailing window recurs exactly five steps back.
        let pattern = [0.3, -1.2, 0.8, 2.0, -0.5];
        let c: Vec<f64> = (0..23).map(|t| pattern[t % 5]).collect();
        let g = GroupingConfig {
            segment_length: 4,
            group_size: 1,
            ..Default::default()
        };
        let cfg = PredictorConfig {
            kind: PredictorKind::Grnn,
            grnn_sigma: 1e-3,
            ..Default::default()
        };
        let out = forecast_high(&c, &g, &cfg, 1).unwrap();
        let member = &out.steps[0].members[0];
        assert_eq!(member.distance, 0.0);
        assert_eq!(out.values[0], c[member.start + 4]);
        assert_eq!(out.values[0], pattern[23 % 5]);
    }
}
