use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, found: usize },

    #[error("non-finite matrix or state entry")]
    NonFinite,

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("state is not normalized (|norm^2 - 1| = {0:.3e})")]
    NotNormalized(f64),

    #[error("state has zero norm")]
    ZeroState,

    #[error("invalid tester: {0}")]
    InvalidTester(String),

    #[error("leaky measurement: outcome probabilities sum to {total:.9}")]
    LeakyMeasurement { total: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("tester input is entangled; the eigenoperator criterion applies to product inputs only")]
    EntangledInput,

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("{name} is not available for d = {d}")]
    UnsupportedDimension { name: String, d: usize },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
