#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Trend plus two tones plus uniform noise; the generator behind
/// `data/composite.csv`.
pub fn composite(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|t| {
            let t = t as f64;
            0.05 * t + 3.0 * (2.0 * PI * t / 24.0).sin() + (2.0 * PI * t / 6.0).sin() + rng.gen_range(-0.2..=0.2)
        })
        .collect()
}

/// A few random sinusoids over a random linear trend.
pub fn smooth(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let tones: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                rng.gen_range(0.1..3.0),
                rng.gen_range(1.0..len as f64 / 6.0),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let slope = rng.gen_range(-0.02..0.02);
    (0..len)
        .map(|t| {
            let t = t as f64;
            slope * t
                + tones
                    .iter()
                    .map(|(a, cycles, phase)| a * (2.0 * PI * cycles * t / len as f64 + phase).sin())
                    .sum::<f64>()
        })
        .collect()
}
