//! Empirical mode decomposition and its noise-assisted ensemble variant.
//!
//! A series is split into intrinsic mode functions (IMFs), fastest first, by
//! repeatedly sifting away the mean of its upper and lower cubic-spline
//! envelopes. What is left once no oscillation remains is the residual.

mod eemd;
mod emd;
mod extrema;
mod spline;

pub use eemd::{eemd, eemd_with_stats, EemdOutput};
pub use emd::{emd, emd_with_stats, extract_imf, sift_once, EmdOutput, ImfExtraction, ImfStats};
pub use extrema::{find_extrema, is_imf, ExtremaSet};
pub use spline::{envelope, NaturalSpline};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::RngSeed;

/// How spline envelopes are anchored beyond the outermost extrema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Reflect the two nearest extrema across each end of the series.
    #[default]
    Mirror,
    /// Pin the end samples as extra knots.
    Clamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SiftConfig {
    /// Sifting stops once SD between successive iterates drops below this.
    pub sd_threshold: f64,
    pub max_sift_iterations: usize,
    pub max_imfs: usize,
    pub boundary_mode: BoundaryMode,
}

impl Default for SiftConfig {
    fn default() -> Self {
        SiftConfig {
            sd_threshold: 0.2,
            max_sift_iterations: 100,
            max_imfs: 12,
            boundary_mode: BoundaryMode::Mirror,
        }
    }
}

impl SiftConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sd_threshold > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sd_threshold must be positive, got {}",
                self.sd_threshold
            )));
        }
        if self.max_sift_iterations == 0 {
            return Err(Error::InvalidParameter("max_sift_iterations must be at least 1".into()));
        }
        if self.max_imfs == 0 {
            return Err(Error::InvalidParameter("max_imfs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EemdConfig {
    pub sift: SiftConfig,
    pub ensemble_size: usize,
    /// Half-width of the uniform noise, as a fraction of the input's standard deviation.
    pub noise_amplitude: f64,
    pub seed: RngSeed,
}

impl Default for EemdConfig {
    fn default() -> Self {
        EemdConfig {
            sift: SiftConfig::default(),
            ensemble_size: 100,
            noise_amplitude: 0.2,
            seed: RngSeed(0),
        }
    }
}

impl EemdConfig {
    pub fn validate(&self) -> Result<()> {
        self.sift.validate()?;
        if self.ensemble_size == 0 {
            return Err(Error::InvalidParameter("ensemble_size must be at least 1".into()));
        }
        if !(self.noise_amplitude >= 0.0) || !self.noise_amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise_amplitude must be non-negative, got {}",
                self.noise_amplitude
            )));
        }
        Ok(())
    }
}
