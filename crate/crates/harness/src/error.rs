use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Rejected input, reported with the offending field path.
    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error(transparent)]
    Runtime(#[from] multilearn::Error),
    #[error("ledger mismatch: charged {charged:?}, composed {composed:?}")]
    LedgerMismatch { charged: (f64, f64), composed: (f64, f64) },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse report: {0}")]
    Report(String),
}

impl HarnessError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Config { path: path.into(), message: message.into() }
    }

    /// Process exit code: 1 for invalid input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. } => 1,
            _ => 2,
        }
    }
}
