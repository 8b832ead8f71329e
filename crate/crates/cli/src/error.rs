use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: simgroup::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use simgroup::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config { .. } => EXIT_USAGE,
            CliError::Write { .. } => EXIT_DATA,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Core { source, .. } => match source.root() {
                E::InvalidParameter(_) | E::InconsistentSplit { .. } | E::NotGradientTrained { .. } | E::Serde(_) => {
                    EXIT_USAGE
                }
                E::NonFiniteLoss { .. } => EXIT_NUMERIC,
                _ => EXIT_DATA,
            },
        }
    }
}

/// Attaches a context string to core errors.
pub trait Context<T> {
    fn context(self, context: impl Into<String>) -> Result<T, CliError>;
}

impl<T> Context<T> for simgroup::Result<T> {
    fn context(self, context: impl Into<String>) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core {
            context: context.into(),
            source,
        })
    }
}
