use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A symbol outside the machine's alphabet, or an over-long input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid superoperator: completeness deviation {deviation:.3e} exceeds tolerance")]
    InvalidSuperoperator { deviation: f64 },

    /// A machine or matrix violated a structural invariant; the message names it.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("pass budget of {budget} exhausted after {rounds_completed} completed round(s)")]
    BudgetExceeded { budget: u64, rounds_completed: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown catalog machine: {0}")]
    UnknownMachine(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
