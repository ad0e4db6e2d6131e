//! Command-line pipeline for hankelkit: input parsing, family construction,
//! the analysis report and the reproduction suite.

pub mod family;
pub mod input;
pub mod pipeline;
pub mod report;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),

    /// A result contradicts another result or fails its own verification.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
