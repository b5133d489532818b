use std::path::PathBuf;

use mquant_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a broken invariant, 4 for file I/O and 5 when
    /// the exhaustive search would be too large.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Output(_) => 4,
            CliError::Json(_) | CliError::Csv(_) => 3,
            CliError::Core(e) => match e {
                CoreError::OracleGuard { .. } => 5,
                CoreError::Invariant(_)
                | CoreError::SupportViolation { .. }
                | CoreError::LengthMismatch { .. }
                | CoreError::IndexOutOfRange { .. }
                | CoreError::PrefixOutOfRange { .. } => 3,
                _ => 2,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
