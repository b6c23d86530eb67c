use std::path::PathBuf;

use thiserror::Error;

/// Failures that stop a command before any check runs.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line; exit code 2.
    #[error("usage: {0}")]
    Usage(String),
    /// Input that does not match its file format; exit code 3.
    #[error("schema: {0}")]
    Schema(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Schema(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn schema(what: &str, e: impl std::fmt::Display) -> Self {
        CliError::Schema(format!("{what}: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
