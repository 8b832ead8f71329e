use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simgroup::grouping::TrainingSet;
use simgroup::predictors::{gradient_check, PredictorConfig, PredictorKind};
use simgroup::RngSeed;

use crate::error::{CliError, Context};
use crate::Globals;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Which {
    Bpnn,
    Wnn,
    Enn,
    All,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub predictor: Which,
    /// Number of random seeds per predictor.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 6)]
    pub input_length: usize,
    #[arg(long, default_value_t = 5)]
    pub hidden: usize,
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
    /// Largest accepted relative error.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

/// Random training set drawn from `seed`: a uniform series cut into
/// sliding windows.
pub fn random_set(seed: RngSeed, input_length: usize, samples: usize) -> Result<TrainingSet, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let series: Vec<f64> = (0..input_length + samples).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TrainingSet::sliding(&series, input_length).context("building training set")
}

pub fn run(args: &GradcheckArgs, globals: &Globals) -> Result<(), CliError> {
    if args.trials == 0 || args.samples == 0 || args.input_length == 0 {
        return Err(CliError::Usage("--trials, --samples and --input-length must be positive".into()));
    }
    let kinds: &[PredictorKind] = match args.predictor {
        Which::Bpnn => &[PredictorKind::Bpnn],
        Which::Wnn => &[PredictorKind::Wnn],
        Which::Enn => &[PredictorKind::Enn],
        Which::All => &[PredictorKind::Bpnn, PredictorKind::Wnn, PredictorKind::Enn],
    };
    let seeds = RngSeed(globals.seed.unwrap_or(0)).expand(args.trials);
    let mut failed = Vec::new();
    for &kind in kinds {
        let mut worst = 0.0_f64;
        for &seed in &seeds {
            let set = random_set(seed, args.input_length, args.samples)?;
            let cfg = PredictorConfig {
                kind,
                hidden_units: args.hidden,
                seed,
                ..Default::default()
            };
            let err = gradient_check(&cfg, &set).context(format!("gradient check {kind}"))?;
            worst = worst.max(err);
        }
        let ok = worst < args.tolerance;
        println!(
            "{kind}: max relative error {worst:.3e} over {} seeds: {}",
            seeds.len(),
            if ok { "ok" } else { "FAILED" }
        );
        if !ok {
            failed.push(kind.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "gradient check above tolerance {:e} for {}",
            args.tolerance,
            failed.join(", ")
        )))
    }
}
