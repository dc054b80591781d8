use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {what}")]
    Pole { what: String },

    #[error("{what}: {value} is outside the supported domain ({bound})")]
    Domain {
        what: &'static str,
        value: String,
        bound: &'static str,
    },

    #[error("{what}: index {index} unsupported (maximum {max})")]
    Unsupported {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("series order {have} is below the required {need}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("{what} = {value:e} is closer to a pole than the guard {guard:e}")]
    PoleProximity {
        what: &'static str,
        value: f64,
        guard: f64,
    },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("budget refused: {0}")]
    Budget(String),

    #[error("integer overflow in {0}")]
    Capacity(&'static str),

    #[error("table covers n <= {have}, needed {need}")]
    TableTooShort { have: u64, need: u64 },

    #[error("invalid shift set: {0}")]
    InvalidShifts(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: impl std::fmt::Display, bound: &'static str) -> Error {
    Error::Domain {
        what,
        value: value.to_string(),
        bound,
    }
}
