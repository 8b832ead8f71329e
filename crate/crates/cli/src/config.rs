//! The JSON run configuration shared by `predict` and `benchmark`.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "dataset": { "path": "series.csv", "column": "value" },
//!   "holdout": 136,
//!   "seed": 7,
//!   "runs": 10,
//!   "frameworks": [{ "variant": "EMD_DTW_NN", "predictor": { "kind": "WNN" } }]
//! }
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simgroup::pipeline::FrameworkSpec;
use simgroup::{Column, RngSeed, TimeSeries};

use crate::error::CliError;
use crate::io::load_series;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    /// 1-based position or header name.
    #[serde(default)]
    pub column: Option<Column>,
    /// Detected from the first row when absent.
    #[serde(default)]
    pub header: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub dataset: DatasetConfig,
    pub frameworks: Vec<FrameworkSpec>,
    /// Base seed. Benchmarks expand it into `runs` seeds.
    #[serde(default)]
    pub seed: Option<RngSeed>,
    /// Explicit benchmark seeds; takes precedence over `seed`.
    #[serde(default)]
    pub seeds: Option<Vec<RngSeed>>,
    #[serde(default)]
    pub runs: Option<usize>,
    /// Training prefix length for benchmarks.
    #[serde(default)]
    pub holdout: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub config: RunConfig,
    base_dir: PathBuf,
}

impl LoadedConfig {
    /// Reads and fully validates a config file.
    pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
        let invalid = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        if config.frameworks.is_empty() {
            return Err(invalid("frameworks must not be empty".into()));
        }
        for (i, spec) in config.frameworks.iter().enumerate() {
            spec.validate()
                .map_err(|e| invalid(format!("frameworks[{i}]: {e}")))?;
        }
        if config.seeds.as_ref().is_some_and(Vec::is_empty) {
            return Err(invalid("seeds must not be empty".into()));
        }
        if config.runs == Some(0) {
            return Err(invalid("runs must be at least 1".into()));
        }
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig {
            path: path.to_path_buf(),
            config,
            base_dir,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn load_dataset(&self) -> Result<TimeSeries, CliError> {
        let d = &self.config.dataset;
        load_series(&self.resolve(&d.path), d.column.clone(), d.header)
    }

    pub fn output_dir(&self) -> Option<PathBuf> {
        self.config.output_dir.as_deref().map(|p| self.resolve(p))
    }

    pub fn invalid(&self, message: impl Into<String>) -> CliError {
        CliError::Config {
            path: self.path.clone(),
            message: message.into(),
        }
    }

    /// Seed list for a benchmark. A command-line seed wins over the
    /// configured list, which wins over the configured base seed.
    pub fn benchmark_seeds(&self, flag_seed: Option<u64>, flag_runs: Option<usize>) -> Result<Vec<RngSeed>, CliError> {
        let c = &self.config;
        let runs = flag_runs.or(c.runs);
        if runs == Some(0) {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        if let Some(seed) = flag_seed {
            return Ok(RngSeed(seed).expand(runs.unwrap_or(10)));
        }
        if let Some(seeds) = &c.seeds {
            let runs = runs.unwrap_or(seeds.len());
            if runs > seeds.len() {
                return Err(self.invalid(format!("{runs} runs requested but only {} seeds listed", seeds.len())));
            }
            return Ok(seeds[..runs].to_vec());
        }
        Ok(c.seed.unwrap_or(RngSeed(0)).expand(runs.unwrap_or(10)))
    }
}
