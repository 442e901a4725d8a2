use thiserror::Error;

use crate::gf::GfError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration of {count} elements exceeds the limit of {limit}")]
    LimitExceeded { count: f64, limit: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("step 1 infeasible: {0}")]
    Step1Infeasible(String),
    #[error("zero-dimensional subspace has no design statistic")]
    ZeroDimensional,
}

pub type Result<T> = std::result::Result<T, Error>;
