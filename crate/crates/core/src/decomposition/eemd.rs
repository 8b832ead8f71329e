use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::{Decomposition, TimeSeries};

use super::emd::{emd_with_stats, ImfStats};
use super::EemdConfig;

#[derive(Debug, Clone)]
pub struct EemdOutput {
    pub decomposition: Decomposition,
    /// Per-trial sifting statistics, in trial order.
    pub trial_stats: Vec<Vec<ImfStats>>,
}

pub fn eemd(series: &TimeSeries, cfg: &EemdConfig) -> Result<Decomposition> {
    eemd_with_stats(series, cfg).map(|out| out.decomposition)
}

/// Noise stream for one trial. Depends only on `(seed, trial)`.
fn trial_rng(cfg: &EemdConfig, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.0);
    rng.set_stream(trial as u64);
    rng
}

/// Averages the IMFs of `ensemble_size` EMD runs over the series plus
/// independent uniform white noise. Shorter trials are zero-padded.
pub fn eemd_with_stats(series: &TimeSeries, cfg: &EemdConfig) -> Result<EemdOutput> {
    cfg.validate()?;
    if series.len() < 4 {
        return Err(Error::TooShort {
            required: 4,
            actual: series.len(),
        });
    }
    let half_width = cfg.noise_amplitude * series.std();

    let trials: Vec<_> = (0..cfg.ensemble_size)
        .into_par_iter()
        .map(|trial| {
            let noisy = if half_width > 0.0 {
                let mut rng = trial_rng(cfg, trial);
                let values = series
                    .values()
                    .iter()
                    .map(|v| v + rng.gen_range(-half_width..=half_width))
                    .collect();
                TimeSeries::new(values)?
            } else {
                series.clone()
            };
            emd_with_stats(&noisy, &cfg.sift)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;

    let imf_count = trials.iter().map(|t| t.decomposition.imf_count()).max().unwrap_or(0);
    let len = series.len();
    let mut imf_sums = vec![vec![0.0; len]; imf_count];
    let mut residual_sum = vec![0.0; len];
    let mut trial_stats = Vec::with_capacity(trials.len());
    for (k, trial) in trials.into_iter().enumerate() {
        let d = &trial.decomposition;
        for (i, sum) in imf_sums.iter_mut().enumerate() {
            if let Some(imf) = d.imfs().get(i) {
                accumulate(sum, imf, k == 0);
            }
        }
        accumulate(&mut residual_sum, d.residual(), k == 0);
        trial_stats.push(trial.stats);
    }
    let n = cfg.ensemble_size as f64;
    for v in imf_sums.iter_mut().flatten().chain(residual_sum.iter_mut()) {
        *v /= n;
    }
    Ok(EemdOutput {
        decomposition: Decomposition::new(imf_sums, residual_sum)?,
        trial_stats,
    })
}

// The first trial is copied rather than added to zero so a single trial
// survives averaging bit-for-bit.
fn accumulate(sum: &mut [f64], values: &[f64], first: bool) {
    for (s, v) in sum.iter_mut().zip(values) {
        if first {
            *s = *v;
        } else {
            *s += v;
        }
    }
}
