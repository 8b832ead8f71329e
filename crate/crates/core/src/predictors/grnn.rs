//! Generalized regression network: a Gaussian-kernel weighted average of the
//! stored targets.

pub(super) fn pack(inputs: &[Vec<f64>], targets: &[f64]) -> Vec<f64> {
    inputs.iter().flatten().chain(targets).copied().collect()
}

pub(super) fn predict(weights: &[f64], input_length: usize, sigma: f64, x: &[f64]) -> f64 {
    let pairs = weights.len() / (input_length + 1);
    let (stored, targets) = weights.split_at(pairs * input_length);
    let sq: Vec<f64> = stored
        .chunks_exact(input_length)
        .map(|s| s.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum())
        .collect();
    // Shift by the nearest distance so at least one kernel is exactly 1.
    let nearest = sq.iter().copied().fold(f64::INFINITY, f64::min);
    let denom = 2.0 * sigma * sigma;
    let mut num = 0.0;
    let mut total = 0.0;
    for (d, t) in sq.iter().zip(targets) {
        let k = (-(d - nearest) / denom).exp();
        num += k * t;
        total += k;
    }
    num / total
}
