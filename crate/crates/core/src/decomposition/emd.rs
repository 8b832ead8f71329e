use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{Decomposition, TimeSeries};

use super::extrema::{find_extrema, is_imf};
use super::spline::envelope;
use super::SiftConfig;

/// Bookkeeping for one extracted IMF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImfStats {
    pub iterations: usize,
    /// SD between the last two sifting iterates.
    pub sd: f64,
    /// False when the iteration cap or extrema exhaustion ended sifting.
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct ImfExtraction {
    pub imf: Vec<f64>,
    pub remainder: Vec<f64>,
    pub stats: ImfStats,
}

#[derive(Debug, Clone)]
pub struct EmdOutput {
    pub decomposition: Decomposition,
    pub stats: Vec<ImfStats>,
}

/// One sifting step: the series minus the mean of its two envelopes.
pub fn sift_once(values: &[f64], cfg: &SiftConfig) -> Result<Vec<f64>> {
    let ext = find_extrema(values)?;
    if !ext.can_sift() {
        return Err(Error::InsufficientExtrema {
            maxima: ext.maxima.len(),
            minima: ext.minima.len(),
        });
    }
    let upper = envelope(values, &ext.maxima, cfg.boundary_mode)?;
    let lower = envelope(values, &ext.minima, cfg.boundary_mode)?;
    Ok(values
        .iter()
        .zip(upper.iter().zip(&lower))
        .map(|(x, (u, l))| x - 0.5 * (u + l))
        .collect())
}

fn sd_between(prev: &[f64], next: &[f64]) -> f64 {
    let num: f64 = prev.iter().zip(next).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = prev.iter().map(|a| a * a).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Sifts until the SD criterion holds and the candidate has matching
/// extrema and zero-crossing counts, or until the iteration cap.
pub fn extract_imf(values: &[f64], cfg: &SiftConfig) -> Result<ImfExtraction> {
    let ext = find_extrema(values)?;
    if !ext.can_sift() {
        return Err(Error::InsufficientExtrema {
            maxima: ext.maxima.len(),
            minima: ext.minima.len(),
        });
    }
    let mut h = values.to_vec();
    let mut iterations = 0;
    let mut sd = f64::INFINITY;
    let mut converged = false;
    loop {
        let next = match sift_once(&h, cfg) {
            Ok(next) => next,
            // The iterate ran out of extrema; it is the best candidate we have.
            Err(Error::InsufficientExtrema { .. }) => break,
            Err(e) => return Err(e),
        };
        iterations += 1;
        sd = sd_between(&h, &next);
        h = next;
        if sd < cfg.sd_threshold && is_imf(&h) {
            converged = true;
            break;
        }
        if iterations >= cfg.max_sift_iterations {
            break;
        }
    }
    if !converged {
        warn!("sifting stopped without convergence after {iterations} iterations (SD {sd:.3e})");
    }
    let remainder = values.iter().zip(&h).map(|(x, c)| x - c).collect();
    Ok(ImfExtraction {
        imf: h,
        remainder,
        stats: ImfStats {
            iterations,
            sd,
            converged,
        },
    })
}

pub fn emd(series: &TimeSeries, cfg: &SiftConfig) -> Result<Decomposition> {
    emd_with_stats(series, cfg).map(|out| out.decomposition)
}

/// Extracts IMFs from the running remainder until it is monotone (fewer than
/// two maxima or minima) or `max_imfs` is reached.
pub fn emd_with_stats(series: &TimeSeries, cfg: &SiftConfig) -> Result<EmdOutput> {
    cfg.validate()?;
    if series.len() < 4 {
        return Err(Error::TooShort {
            required: 4,
            actual: series.len(),
        });
    }
    let mut remainder = series.values().to_vec();
    let mut imfs = Vec::new();
    let mut stats = Vec::new();
    while imfs.len() < cfg.max_imfs {
        if !find_extrema(&remainder)?.can_sift() {
            break;
        }
        let extraction = extract_imf(&remainder, cfg)?;
        imfs.push(extraction.imf);
        stats.push(extraction.stats);
        remainder = extraction.remainder;
    }
    Ok(EmdOutput {
        decomposition: Decomposition::new(imfs, remainder)?,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::BoundaryMode;
    use std::f64::consts::PI;

    fn tone(freq: f64, len: usize) -> Vec<f64> {
        (0..len)
            .map(|t| (2.0 * PI * freq * t as f64 / len as f64).sin())
            .collect()
    }

    fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    #[test]
    fn pure_imf_is_a_sifting_fixed_point() {
        let x: Vec<f64> = (0..256).map(|t| (2.0 * PI * t as f64 / 32.0).sin()).collect();
        let h = sift_once(&x, &SiftConfig::default()).unwrap();
        let diff = x.iter().zip(&h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-6, "{diff}");
    }

    #[test]
    fn sifting_shrinks_an_offset() {
        let c = 0.7;
        let x: Vec<f64> = (0..256).map(|t| (2.0 * PI * t as f64 / 32.0).sin() + c).collect();
        let h = sift_once(&x, &SiftConfig::default()).unwrap();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&h).abs() < mean(&x).abs());
    }

    #[test]
    fn sifting_needs_two_of_each_extremum() {
        let x = [0.0, 1.0, 0.0, -1.0, -2.0, -1.0, 0.0];
        assert!(matches!(
            sift_once(&x, &SiftConfig::default()),
            Err(Error::InsufficientExtrema { maxima: 1, .. })
        ));
    }

    #[test]
    fn extracts_the_fast_tone() {
        let fast = tone(8.0, 512);
        let slow = tone(1.0, 512);
        let x: Vec<f64> = fast.iter().zip(&slow).map(|(a, b)| a + b).collect();
        let out = extract_imf(&x, &SiftConfig::default()).unwrap();
        assert!(correlation(&out.imf, &fast) > 0.95);
        assert!(out.stats.converged);
        let ext = find_extrema(&out.imf).unwrap();
        assert!(ext.extrema_count().abs_diff(ext.zero_crossings) <= 1);
    }

    #[test]
    fn existing_imf_leaves_tiny_remainder() {
        let x: Vec<f64> = (0..300).map(|t| 2.0 * (2.0 * PI * t as f64 / 25.0).sin()).collect();
        let out = extract_imf(&x, &SiftConfig::default()).unwrap();
        let rem = out.remainder.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(rem < 1e-3 * 2.0, "{rem}");
    }

    #[test]
    fn iteration_cap_is_respected() {
        let fast = tone(8.0, 512);
        let slow = tone(1.0, 512);
        let x: Vec<f64> = fast.iter().zip(&slow).map(|(a, b)| a + 3.0 * b).collect();
        let cfg = SiftConfig {
            max_sift_iterations: 1,
            sd_threshold: 1e-12,
            ..Default::default()
        };
        let out = extract_imf(&x, &cfg).unwrap();
        assert_eq!(out.stats.iterations, 1);
        assert!(!out.stats.converged);
    }

    #[test]
    fn monotone_and_constant_have_no_imfs() {
        for v in [vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![3.0; 10]] {
            let s = TimeSeries::new(v.clone()).unwrap();
            let d = emd(&s, &SiftConfig::default()).unwrap();
            assert_eq!(d.imf_count(), 0);
            assert_eq!(d.residual(), v.as_slice());
        }
    }

    #[test]
    fn too_short() {
        let s = TimeSeries::new(vec![1.0, 2.0, 1.0]).unwrap();
        assert!(matches!(emd(&s, &SiftConfig::default()), Err(Error::TooShort { .. })));
    }

    #[test]
    fn two_tone_decomposition() {
        let fast = tone(8.0, 512);
        let slow = tone(1.0, 512);
        let x: Vec<f64> = fast.iter().zip(&slow).map(|(a, b)| a + b).collect();
        let s = TimeSeries::new(x.clone()).unwrap();
        for mode in [BoundaryMode::Mirror, BoundaryMode::Clamp] {
            let cfg = SiftConfig {
                boundary_mode: mode,
                ..Default::default()
            };
            let d = emd(&s, &cfg).unwrap();
            assert!(d.imf_count() >= 1);
            assert!(d.is_ordered());
            assert!(correlation(&d.imfs()[0], &fast) > 0.95);
            let rec = d.reconstruct();
            let err = rec.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9 * s.max_abs());
        }
    }

    #[test]
    fn imf_cap() {
        let x: Vec<f64> = (0..400)
            .map(|t| {
                let t = t as f64;
                (t * 0.9).sin() + (t * 0.21).sin() + (t * 0.05).sin()
            })
            .collect();
        let s = TimeSeries::new(x).unwrap();
        let cfg = SiftConfig {
            max_imfs: 1,
            ..Default::default()
        };
        assert_eq!(emd(&s, &cfg).unwrap().imf_count(), 1);
    }
}
