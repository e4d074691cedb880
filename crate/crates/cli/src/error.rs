use std::io;

use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ewc_core::Error),
    #[error("{path}: {source}")]
    File { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ewc_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::InvalidArgument(_)) => EXIT_USAGE,
            CliError::Core(E::Tolerance(_)) => EXIT_TOLERANCE,
            CliError::Core(E::Io(_)) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Core(_) | CliError::File { .. } => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
