use std::process::ExitCode;

use thiserror::Error;

/// Failures surfaced by the command line, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Capacity(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {message}")]
    InvalidCodeword { line: usize, message: String },

    #[error("{0}")]
    Schema(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] tsgraph::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Capacity(_) | CliError::Core(tsgraph::Error::Capacity { .. }) => 2,
            CliError::Parse { .. } => 3,
            CliError::InvalidCodeword { .. } => 4,
            CliError::Schema(_) => 5,
            _ => 1,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
