use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuessworkError {
    #[error("invalid dimension {0}: must be at least 2")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm {norm:.3e})")]
    NotNormalized { norm: f64 },

    #[error("measurement basis is not orthonormal (max |G - I| = {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("outcome index {outcome} out of range for dimension {dim}")]
    OutcomeOutOfRange { outcome: usize, dim: usize },

    #[error("posterior undefined: outcome {0} has zero probability")]
    UndefinedPosterior(usize),

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("brute force refused: {n} symbols exceeds the limit of {limit}")]
    TooManySymbols { n: usize, limit: usize },

    #[error("constraint |{0}|^2 + |{1}|^2 = 1 violated (got {2:.3e})")]
    ConstraintViolation(&'static str, &'static str, f64),

    #[error("expected {expected} parameters, got {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("hedemann parameterization is only defined for d = 3 or 4 (got {0})")]
    UnsupportedParameterization(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid crosstalk matrix: {0}")]
    InvalidCrosstalk(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, GuessworkError>;
