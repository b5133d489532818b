use thiserror::Error;

/// Errors raised while building targets, quantizing, or evaluating bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,

    #[error("line {line}: cannot parse {content:?} as a probability")]
    Parse { line: usize, content: String },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("negative entry at index {index}: {value}")]
    Negative { index: usize, value: f64 },

    #[error("no positive entry in input")]
    NoMass,

    #[error("entries sum to {sum}, expected 1 within {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("entries sum to {sum}, more than a sub-probability vector allows")]
    MassExceeded { sum: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("materialized length {len} exceeds limit {limit}")]
    TruncationOverflow { len: usize, limit: usize },

    #[error("M must be at least 1")]
    ZeroM,

    #[error("index {index} is beyond the materialized prefix of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: approximation has {approx} entries, target has {target}")]
    LengthMismatch { approx: usize, target: usize },

    #[error("approximation puts mass on index {index} where the target is zero")]
    SupportViolation { index: usize },

    #[error("prefix {m} outside 1..={len}")]
    PrefixOutOfRange { m: u64, len: u64 },

    #[error("{compositions} compositions exceed the exhaustive-search limit {limit}")]
    OracleGuard { compositions: u128, limit: u128 },

    #[error("missing input for bound: {0}")]
    MissingInput(&'static str),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
