use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 32768")]
    InvalidPrime(u64),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index {index} out of range [1, {max}] for degree {degree}")]
    IndexOutOfRange {
        index: usize,
        max: usize,
        degree: usize,
    },

    #[error("enumeration budget exceeded: {needed} evaluations needed, cap is {cap}")]
    BudgetExceeded { needed: String, cap: u64 },

    #[error("colors {colors:?} are not fixed by the braid action")]
    NotAColoring { colors: Vec<u32> },

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
