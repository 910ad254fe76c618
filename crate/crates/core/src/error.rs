use thiserror::Error;

/// Errors raised across the library.
///
/// Variants are grouped by the layer that produces them; the CLI maps
/// `Unsupported` and `Resource` to dedicated exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error(
        "expansivity is indeterminate: an eigenvalue modulus lies within {margin:e} of 1 (min modulus {min_modulus})"
    )]
    IndeterminateExpansivity { min_modulus: f64, margin: f64 },

    #[error("matrix R is not expansive")]
    NotExpansive,
    #[error("digit set must contain the zero vector")]
    MissingZeroDigit,
    #[error("duplicate digit {0:?}")]
    DuplicateDigit(Vec<i64>),
    #[error("digits {0:?} and {1:?} are congruent modulo R")]
    CongruentDigits(Vec<i64>, Vec<i64>),
    #[error("empty {0}")]
    Empty(&'static str),

    #[error("label set must contain the zero vector")]
    MissingZeroLabel,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(Vec<i64>),
    #[error("weight of the zero label must be exactly 1, got {0}")]
    ZeroLabelWeight(String),
    #[error("weight of label {0:?} is zero but not flagged as padding")]
    ZeroWeight(Vec<i64>),
    #[error("label count {labels} does not match weight count {weights}")]
    WeightCount { labels: usize, weights: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {what} needs {needed}, budget is {budget}")]
    Resource { what: &'static str, needed: u128, budget: u128 },
    #[error("grid is not closed under the transition maps; missing points: {}", .0.join(", "))]
    GridNotClosed(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
