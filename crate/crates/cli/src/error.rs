use std::path::Path;
use std::process::ExitCode;

use rowq_core::Error;
use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// The pipeline contradicted itself; this is a bug, not bad input.
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("infeasible solution: {0}")]
    Infeasible(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Capacity(_) => 4,
            CliError::Integrity(_) => 5,
            CliError::Infeasible(_) => 6,
        }
    }

    /// Prefixes parse errors with the file they came from.
    pub fn in_file(err: Error, path: &Path) -> Self {
        match CliError::from(err) {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(err: CliError) -> Self {
        ExitCode::from(err.exit_code())
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err {
            Error::EmptyInput
            | Error::Parse { .. }
            | Error::Format { .. }
            | Error::Overflow { .. }
            | Error::Document(_) => CliError::Parse(msg),
            Error::Domain(_) | Error::InfeasibleK { .. } | Error::Config(_) => CliError::Usage(msg),
            Error::Capacity(_) => CliError::Capacity(msg),
            Error::Integrity(_) => CliError::Integrity(msg),
            Error::Io(_) => CliError::Io(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Parse(err.to_string())
    }
}
