use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Reasons a weight sequence is rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weight vector is empty")]
    Empty,
    #[error("weights are not non-increasing: w[{index}] = {value} < w[{next_index}] = {next_value}", next_index = .index + 1)]
    NotSorted {
        index: usize,
        value: f64,
        next_value: f64,
    },
    #[error("weight w[{index}] = {value} is negative")]
    Negative { index: usize, value: f64 },
    #[error("leading weight must be strictly positive")]
    ZeroLeading,
    #[error("weight w[{index}] is not finite")]
    NonFinite { index: usize },
    #[error("invalid weight parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("empty input")]
    Empty,
    #[error("dimension {n} too large for vertex enumeration (max {max})")]
    TooLarge { n: usize, max: usize },
    #[error("input is not sorted by non-increasing magnitude at index {index}")]
    NotSortedInput { index: usize },
    #[error("input contains a negative value at index {index}")]
    NegativeInput { index: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("non-finite value encountered at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            actual,
        })
    }
}
