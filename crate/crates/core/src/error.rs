use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("empty series")]
    EmptySeries,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("label count {labels} does not match series length {len}")]
    LabelMismatch { labels: usize, len: usize },

    #[error("series too short: need at least {required} points, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("insufficient extrema: {maxima} maxima and {minima} minima (need 2 of each)")]
    InsufficientExtrema { maxima: usize, minima: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent split: P + Q must equal N + 1 = {expected}, got P = {p}, Q = {q}")]
    InconsistentSplit { p: usize, q: usize, expected: usize },

    #[error("no eligible candidate segments (series length {len}, segment length {segment_length})")]
    NoCandidates { len: usize, segment_length: usize },

    #[error("relative error undefined for zero actual value")]
    ZeroActual,

    #[error("non-finite training loss at epoch {epoch} (learning rate {learning_rate})")]
    NonFiniteLoss { epoch: usize, learning_rate: f64 },

    #[error("{kind} is not gradient-trained")]
    NotGradientTrained { kind: String },

    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_component(self, index: usize) -> Error {
        Error::Component {
            index,
            source: Box::new(self),
        }
    }

    /// Strips component annotations and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Component { source, .. } => source.root(),
            other => other,
        }
    }
}
