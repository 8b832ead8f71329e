//! Small neural regressors mapping a length-`L` window to the next value.
//!
//! Every model rescales its training data onto `[0, 1]` (one min-max map over
//! all inputs and targets) and works in that space; [`TrainedModel::predict`]
//! takes and returns raw values.
//!
//! Flat weight layouts, with `H` hidden units and `L` inputs:
//!
//! | kind | layout | count |
//! |------|--------|-------|
//! | BPNN | `W[H][L], b[H], v[H], c` | `H·L + 2H + 1` |
//! | WNN  | `W[H][L], shift[H], scale[H], v[H], c` | `H·L + 3H + 1` |
//! | ENN  | `W[H][L], U[H][H], b[H], v[H], c` | `H·L + H² + 2H + 1` |
//! | GRNN | `x[N][L], y[N]` (stored normalized pairs) | `N·(L + 1)` |

mod elman;
mod feedforward;
mod grnn;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouping::TrainingSet;
use crate::series::{MinMaxScale, RngSeed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PredictorKind {
    /// Back-propagation network: sigmoid hidden layer, linear output.
    #[default]
    #[serde(rename = "BPNN")]
    Bpnn,
    /// Generalized regression network (Nadaraya-Watson, Gaussian kernel).
    #[serde(rename = "GRNN")]
    Grnn,
    /// Elman network with a context copy of the previous hidden state.
    #[serde(rename = "ENN")]
    Enn,
    /// Wavelet network with a Morlet hidden activation.
    #[serde(rename = "WNN")]
    Wnn,
}

impl PredictorKind {
    pub const ALL: [PredictorKind; 4] = [
        PredictorKind::Wnn,
        PredictorKind::Enn,
        PredictorKind::Bpnn,
        PredictorKind::Grnn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredictorKind::Bpnn => "BPNN",
            PredictorKind::Grnn => "GRNN",
            PredictorKind::Enn => "ENN",
            PredictorKind::Wnn => "WNN",
        }
    }

    pub fn is_gradient_trained(self) -> bool {
        !matches!(self, PredictorKind::Grnn)
    }

    /// Parameter count for `L` inputs, `H` hidden units and `N` stored pairs.
    pub fn weight_count(self, inputs: usize, hidden: usize, pairs: usize) -> usize {
        match self {
            PredictorKind::Bpnn => feedforward::Layout::new(inputs, hidden, false).len(),
            PredictorKind::Wnn => feedforward::Layout::new(inputs, hidden, true).len(),
            PredictorKind::Enn => elman::Layout::new(inputs, hidden).len(),
            PredictorKind::Grnn => pairs * (inputs + 1),
        }
    }
}

impl std::fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictorConfig {
    pub kind: PredictorKind,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Kernel bandwidth in normalized units.
    pub grnn_sigma: f64,
    pub seed: RngSeed,
}

impl Default for PredictorConfig {
    fn default() -> Self {
        PredictorConfig {
            kind: PredictorKind::Bpnn,
            hidden_units: 8,
            learning_rate: 0.05,
            epochs: 500,
            grnn_sigma: 0.1,
            seed: RngSeed(0),
        }
    }
}

impl PredictorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_units == 0 {
            return Err(Error::InvalidParameter("hidden_units must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidParameter("epochs must be at least 1".into()));
        }
        if !(self.grnn_sigma > 0.0 && self.grnn_sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grnn_sigma must be positive, got {}",
                self.grnn_sigma
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: RngSeed) -> PredictorConfig {
        PredictorConfig {
            seed,
            ..self.clone()
        }
    }
}

/// A fitted regressor; immutable once trained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainedModel {
    pub kind: PredictorKind,
    pub input_length: usize,
    pub hidden_units: usize,
    /// GRNN bandwidth; unused by the other kinds.
    pub sigma: f64,
    pub weights: Vec<f64>,
    pub scale: MinMaxScale,
    /// Mean squared error (normalized) at initialization, then after each epoch.
    pub training_loss_curve: Vec<f64>,
}

/// Training pairs mapped into the model's normalized space, ordered by
/// source position.
struct Prepared {
    inputs: Vec<Vec<f64>>,
    targets: Vec<f64>,
    scale: MinMaxScale,
}

fn prepare(set: &TrainingSet) -> Result<Prepared> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("training set is empty".into()));
    }
    let l = set.input_length();
    if l == 0 || set.inputs.len() != set.targets.len() {
        return Err(Error::InvalidParameter("malformed training set".into()));
    }
    if let Some(bad) = set.inputs.iter().find(|x| x.len() != l) {
        return Err(Error::LengthMismatch {
            left: bad.len(),
            right: l,
        });
    }
    let all: Vec<f64> = set.inputs.iter().flatten().chain(&set.targets).copied().collect();
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("training set contains non-finite values".into()));
    }
    let scale = MinMaxScale::fit(&all);
    let mut order: Vec<usize> = (0..set.len()).collect();
    if set.provenance.len() == set.len() {
        order.sort_by_key(|&i| set.provenance[i].start);
    }
    Ok(Prepared {
        inputs: order
            .iter()
            .map(|&i| set.inputs[i].iter().map(|&v| scale.normalize(v)).collect())
            .collect(),
        targets: order.iter().map(|&i| scale.normalize(set.targets[i])).collect(),
        scale,
    })
}

fn init_uniform(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-0.5..=0.5)).collect()
}

fn initial_weights(kind: PredictorKind, inputs: usize, hidden: usize, seed: RngSeed) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    match kind {
        PredictorKind::Bpnn => init_uniform(&mut rng, feedforward::Layout::new(inputs, hidden, false).len()),
        PredictorKind::Wnn => {
            let layout = feedforward::Layout::new(inputs, hidden, true);
            let mut w = init_uniform(&mut rng, layout.len());
            // Dilations start in [0.5, 1.5] to keep the wavelet well scaled.
            for d in layout.dilation_range() {
                w[d] += 1.0;
            }
            w
        }
        PredictorKind::Enn => init_uniform(&mut rng, elman::Layout::new(inputs, hidden).len()),
        PredictorKind::Grnn => Vec::new(),
    }
}

/// Loss and gradient of the normalized objective for a gradient-trained kind.
fn loss_and_gradient(kind: PredictorKind, hidden: usize, weights: &[f64], data: &Prepared) -> (f64, Vec<f64>) {
    let l = data.inputs[0].len();
    match kind {
        PredictorKind::Bpnn | PredictorKind::Wnn => feedforward::loss_and_gradient(
            &feedforward::Layout::new(l, hidden, kind == PredictorKind::Wnn),
            weights,
            &data.inputs,
            &data.targets,
        ),
        PredictorKind::Enn => {
            let layout = elman::Layout::new(l, hidden);
            let contexts = elman::contexts(&layout, weights, &data.inputs);
            elman::loss_and_gradient(&layout, weights, &data.inputs, &data.targets, &contexts)
        }
        PredictorKind::Grnn => unreachable!("GRNN is not gradient-trained"),
    }
}

/// Fits a model of `cfg.kind` to `set`. Deterministic given `cfg.seed`.
pub fn train(set: &TrainingSet, cfg: &PredictorConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    let data = prepare(set)?;
    let l = data.inputs[0].len();
    let mut model = TrainedModel {
        kind: cfg.kind,
        input_length: l,
        hidden_units: cfg.hidden_units,
        sigma: cfg.grnn_sigma,
        weights: Vec::new(),
        scale: data.scale,
        training_loss_curve: Vec::new(),
    };
    if cfg.kind == PredictorKind::Grnn {
        model.weights = grnn::pack(&data.inputs, &data.targets);
        return Ok(model);
    }

    let mut weights = initial_weights(cfg.kind, l, cfg.hidden_units, cfg.seed);
    let mut curve = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..=cfg.epochs {
        let (loss, grad) = loss_and_gradient(cfg.kind, cfg.hidden_units, &weights, &data);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteLoss {
                epoch,
                learning_rate: cfg.learning_rate,
            });
        }
        curve.push(loss);
        if epoch == cfg.epochs {
            break;
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= cfg.learning_rate * g;
        }
    }
    model.weights = weights;
    model.training_loss_curve = curve;
    Ok(model)
}

impl TrainedModel {
    /// One-step prediction from a raw input window. ENN starts from a zero
    /// context.
    pub fn predict(&self, input: &[f64]) -> Result<f64> {
        self.session().step(input)
    }

    /// A forecast session carrying ENN context state between steps.
    pub fn session(&self) -> ForecastSession<'_> {
        ForecastSession {
            model: self,
            context: vec![0.0; self.hidden_units],
        }
    }

    fn predict_normalized(&self, x: &[f64], context: &mut [f64]) -> f64 {
        match self.kind {
            PredictorKind::Bpnn | PredictorKind::Wnn => feedforward::forward(
                &feedforward::Layout::new(self.input_length, self.hidden_units, self.kind == PredictorKind::Wnn),
                &self.weights,
                x,
            ),
            PredictorKind::Enn => {
                let (y, hidden) = elman::forward(
                    &elman::Layout::new(self.input_length, self.hidden_units),
                    &self.weights,
                    x,
                    context,
                );
                context.copy_from_slice(&hidden);
                y
            }
            PredictorKind::Grnn => grnn::predict(&self.weights, self.input_length, self.sigma, x),
        }
    }

    /// Checks the weight vector against the architecture.
    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            PredictorKind::Grnn => {
                !self.weights.is_empty() && self.weights.len().is_multiple_of(self.input_length + 1)
            }
            kind => self.weights.len() == kind.weight_count(self.input_length, self.hidden_units, 0),
        };
        if !ok || self.input_length == 0 {
            return Err(Error::InvalidParameter(format!(
                "{} model with L = {}, H = {} cannot hold {} weights",
                self.kind,
                self.input_length,
                self.hidden_units,
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("model weights must be finite".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(doc: &str) -> Result<TrainedModel> {
        let model: TrainedModel = serde_json::from_str(doc)?;
        model.validate()?;
        Ok(model)
    }
}

/// Sequential predictions from one model. Only ENN carries state.
pub struct ForecastSession<'a> {
    model: &'a TrainedModel,
    context: Vec<f64>,
}

impl ForecastSession<'_> {
    pub fn step(&mut self, input: &[f64]) -> Result<f64> {
        let model = self.model;
        if input.len() != model.input_length {
            return Err(Error::LengthMismatch {
                left: input.len(),
                right: model.input_length,
            });
        }
        if let Some((index, &value)) = input.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        let x: Vec<f64> = input.iter().map(|&v| model.scale.normalize(v)).collect();
        let y = model.predict_normalized(&x, &mut self.context);
        Ok(model.scale.denormalize(y))
    }
}

type LossFn<'a> = Box<dyn Fn(&[f64]) -> f64 + 'a>;

/// Largest relative discrepancy between the analytic gradient and central
/// finite differences (step `1e-5`) at the seeded initial weights.
///
/// Each entry is `|a - n| / max(|a|, |n|, 1e-6)`. For ENN the context
/// sequence is frozen at the evaluation point, matching the one-step
/// truncated gradient used in training.
pub fn gradient_check(cfg: &PredictorConfig, set: &TrainingSet) -> Result<f64> {
    if !cfg.kind.is_gradient_trained() {
        return Err(Error::NotGradientTrained {
            kind: cfg.kind.to_string(),
        });
    }
    cfg.validate()?;
    let data = prepare(set)?;
    let l = data.inputs[0].len();
    let weights = initial_weights(cfg.kind, l, cfg.hidden_units, cfg.seed);

    let (analytic, loss_at): (Vec<f64>, LossFn) = match cfg.kind {
        PredictorKind::Bpnn | PredictorKind::Wnn => {
            let layout = feedforward::Layout::new(l, cfg.hidden_units, cfg.kind == PredictorKind::Wnn);
            let (_, g) = feedforward::loss_and_gradient(&layout, &weights, &data.inputs, &data.targets);
            let data = &data;
            (
                g,
                Box::new(move |w: &[f64]| {
                    feedforward::loss_and_gradient(&layout, w, &data.inputs, &data.targets).0
                }),
            )
        }
        PredictorKind::Enn => {
            let layout = elman::Layout::new(l, cfg.hidden_units);
            let contexts = elman::contexts(&layout, &weights, &data.inputs);
            let (_, g) = elman::loss_and_gradient(&layout, &weights, &data.inputs, &data.targets, &contexts);
            let data = &data;
            (
                g,
                Box::new(move |w: &[f64]| {
                    elman::loss_and_gradient(&layout, w, &data.inputs, &data.targets, &contexts).0
                }),
            )
        }
        PredictorKind::Grnn => unreachable!(),
    };

    const STEP: f64 = 1e-5;
    let mut worst = 0.0_f64;
    let mut probe = weights.clone();
    for (k, &a) in analytic.iter().enumerate() {
        probe[k] = weights[k] + STEP;
        let up = loss_at(&probe);
        probe[k] = weights[k] - STEP;
        let down = loss_at(&probe);
        probe[k] = weights[k];
        let numeric = (up - down) / (2.0 * STEP);
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
        worst = worst.max(rel);
    }
    Ok(worst)
}
