//! Series and decomposition value types, CSV ingestion, min-max scaling and
//! seed derivation.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled real-valued series with optional per-point labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(TimeSeries {
            values,
            labels: None,
        })
    }

    pub fn with_labels(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        let mut series = TimeSeries::new(values)?;
        if labels.len() != series.len() {
            return Err(Error::LabelMismatch {
                labels: labels.len(),
                len: series.len(),
            });
        }
        series.labels = Some(labels);
        Ok(series)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Leading `n` points, labels included.
    pub fn head(&self, n: usize) -> Result<TimeSeries> {
        let n = n.min(self.len());
        let values = self.values[..n].to_vec();
        match &self.labels {
            Some(labels) => TimeSeries::with_labels(values, labels[..n].to_vec()),
            None => TimeSeries::new(values),
        }
    }

    /// Points from `start` to the end, labels included.
    pub fn tail_from(&self, start: usize) -> Result<TimeSeries> {
        let start = start.min(self.len());
        let values = self.values[start..].to_vec();
        match &self.labels {
            Some(labels) => TimeSeries::with_labels(values, labels[start..].to_vec()),
            None => TimeSeries::new(values),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / self.len() as f64;
        var.sqrt()
    }
}

/// IMFs (fastest first) plus the residual trend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    imfs: Vec<Vec<f64>>,
    residual: Vec<f64>,
}

impl Decomposition {
    pub fn new(imfs: Vec<Vec<f64>>, residual: Vec<f64>) -> Result<Self> {
        if residual.is_empty() {
            return Err(Error::EmptySeries);
        }
        for imf in &imfs {
            if imf.len() != residual.len() {
                return Err(Error::LengthMismatch {
                    left: imf.len(),
                    right: residual.len(),
                });
            }
        }
        Ok(Decomposition { imfs, residual })
    }

    pub fn imfs(&self) -> &[Vec<f64>] {
        &self.imfs
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    pub fn imf_count(&self) -> usize {
        self.imfs.len()
    }

    pub fn source_length(&self) -> usize {
        self.residual.len()
    }

    /// All N + 1 components, residual last.
    pub fn components(&self) -> impl Iterator<Item = &[f64]> {
        self.imfs
            .iter()
            .map(Vec::as_slice)
            .chain(std::iter::once(self.residual.as_slice()))
    }

    /// Pointwise sum of every IMF and the residual.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.source_length()];
        for comp in self.components() {
            for (o, v) in out.iter_mut().zip(comp) {
                *o += v;
            }
        }
        out
    }

    /// Whether zero-crossing counts are non-increasing along the IMF list.
    pub fn is_ordered(&self) -> bool {
        let counts: Vec<usize> = self.imfs.iter().map(|imf| count_zero_crossings(imf)).collect();
        counts.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Counts strict sign changes, with exact zeros counted as non-negative.
pub fn count_zero_crossings(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count()
}

/// Partition of the N + 1 components into P high- and Q low-frequency ones.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySplit {
    pub high: Vec<Vec<f64>>,
    pub low: Vec<Vec<f64>>,
}

impl FrequencySplit {
    pub fn p_count(&self) -> usize {
        self.high.len()
    }

    pub fn q_count(&self) -> usize {
        self.low.len()
    }
}

/// Seed for every pseudo-random stream in the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Derives an independent child seed; a pure function of `(self, index)`.
    pub fn derive(self, index: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    /// Expands a base seed into `count` run seeds.
    pub fn expand(self, count: usize) -> Vec<RngSeed> {
        (0..count as u64).map(|i| self.derive(i)).collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Inverse parameters of a min-max map onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScale {
    pub min: f64,
    pub max: f64,
    /// Set when `min == max`; every value then maps to 0.5.
    pub degenerate: bool,
}

impl MinMaxScale {
    pub fn fit(values: &[f64]) -> MinMaxScale {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        MinMaxScale {
            min,
            max,
            degenerate: !(max > min),
        }
    }

    pub fn identity() -> MinMaxScale {
        MinMaxScale {
            min: 0.0,
            max: 1.0,
            degenerate: false,
        }
    }

    pub fn normalize(&self, v: f64) -> f64 {
        if self.degenerate {
            0.5
        } else {
            (v - self.min) / (self.max - self.min)
        }
    }

    pub fn denormalize(&self, v: f64) -> f64 {
        if self.degenerate {
            self.min
        } else {
            self.min + v * (self.max - self.min)
        }
    }
}

/// Maps a series onto `[0, 1]`; constant series become all 0.5.
pub fn minmax_normalize(series: &TimeSeries) -> Result<(TimeSeries, MinMaxScale)> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: series.len(),
        });
    }
    let scale = MinMaxScale::fit(series.values());
    let values = series.values().iter().map(|&v| scale.normalize(v)).collect();
    Ok((TimeSeries::new(values)?, scale))
}

pub fn denormalize(series: &TimeSeries, scale: &MinMaxScale) -> Result<TimeSeries> {
    TimeSeries::new(series.values().iter().map(|&v| scale.denormalize(v)).collect())
}

/// Which CSV column holds the values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Column {
    /// 1-based column position.
    Position(usize),
    /// Header name; requires a header row.
    Name(String),
}

impl std::fmt::Display for Column {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Column::Position(p) => write!(f, "{p}"),
            Column::Name(n) => write!(f, "{n}"),
        }
    }
}

/// Reads one numeric column of a CSV file. Row numbers in errors are file
/// line numbers.
pub fn load_csv(path: impl AsRef<Path>, column: &Column, has_header: bool) -> Result<TimeSeries> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&bytes, column, has_header).map_err(|e| match e {
        Error::Parse {
            row,
            column,
            message,
            ..
        } => Error::Parse {
            path: path.to_path_buf(),
            row,
            column,
            message,
        },
        other => other,
    })
}

/// Same as [`load_csv`] over an in-memory document.
pub fn parse_csv(bytes: &[u8], column: &Column, has_header: bool) -> Result<TimeSeries> {
    let parse_err = |row: usize, message: String| Error::Parse {
        path: Default::default(),
        row,
        column: column.to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let index = match column {
        Column::Position(0) => return Err(Error::InvalidParameter("column positions start at 1".into())),
        Column::Position(p) => p - 1,
        Column::Name(name) => {
            if !has_header {
                return Err(Error::InvalidParameter(format!(
                    "column {name:?} selected by name but the file has no header"
                )));
            }
            let headers = reader.headers().map_err(|e| parse_err(1, e.to_string()))?;
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| parse_err(1, format!("no column named {name:?}")))?
        }
    };

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            parse_err(row, e.to_string())
        })?;
        let row = record.position().map_or(values.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let cell = record.get(index).unwrap_or("");
        if cell.is_empty() {
            return Err(parse_err(row, "missing value".into()));
        }
        let value: f64 = cell
            .parse()
            .map_err(|_| parse_err(row, format!("cannot parse {cell:?} as a number")))?;
        if !value.is_finite() {
            return Err(parse_err(row, format!("non-finite value {cell:?}")));
        }
        values.push(value);
        if index != 0 {
            labels.push(record.get(0).unwrap_or("").to_string());
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if index != 0 {
        TimeSeries::with_labels(values, labels)
    } else {
        TimeSeries::new(values)
    }
}

/// Renders named columns as CSV. Numbers use the shortest representation
/// that parses back to the same `f64`.
pub fn columns_to_csv(headers: &[String], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for r in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", col[r]);
        }
        out.push('\n');
    }
    out
}
