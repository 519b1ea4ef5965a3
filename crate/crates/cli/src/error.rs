use std::path::PathBuf;

use casimir_core::CasimirError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Compute(#[from] CasimirError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad arguments, 3 for numerical guard violations, 4 for I/O,
    /// 1 when validation ran but found failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) if e.is_numerical_guard() => 3,
            CliError::Compute(_) => 2,
            CliError::Io { .. } => 4,
            CliError::ValidationFailed(_) => 1,
        }
    }
}
