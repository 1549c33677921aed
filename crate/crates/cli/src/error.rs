use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown class key: {0}")]
    UnknownKey(String),
    #[error("invalid input {}: {reason}", path.display())]
    InvalidFile { path: PathBuf, reason: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn invalid(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        CliError::InvalidFile { path: path.into(), reason: reason.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Config(_) => 3,
            CliError::UnknownKey(_) => 4,
            CliError::InvalidFile { .. } => 5,
        }
    }
}
