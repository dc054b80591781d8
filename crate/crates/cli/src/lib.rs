//! Front end for the divisor-moments experiments: config handling, report
//! records, verification checks and the four commands.

pub mod checks;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Budget(String),

    #[error("verification failed: {0}")]
    Failed(String),

    #[error(transparent)]
    Core(divisor_moments::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<divisor_moments::Error> for CliError {
    fn from(e: divisor_moments::Error) -> Self {
        match e {
            divisor_moments::Error::Budget(m) => CliError::Budget(format!("budget refused: {m}")),
            divisor_moments::Error::Config(m) => CliError::Config(m),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// 1 verification failure, 2 config error, 3 budget refusal. Numerical
    /// errors count as verification failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Failed(_) | CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
