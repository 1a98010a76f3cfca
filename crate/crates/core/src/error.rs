use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("elements belong to different algebra contexts")]
    Context,

    #[error("degree bound {bound} is smaller than the element degree {degree}")]
    Bound { bound: usize, degree: usize },

    #[error("Haar state not supported on word `{0}` (only bidegrees (0,0) and (1,1) are implemented)")]
    UnsupportedDegree(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
