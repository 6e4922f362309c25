use std::path::PathBuf;

use thiserror::Error;

/// Everything a command can fail with, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] densecode_core::Error),
}

impl CliError {
    /// 1 is reserved for failed checks, which are not errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Usage(_) | CliError::Config { .. } | CliError::Parse(_) | CliError::Model(_) => 2,
        }
    }
}
