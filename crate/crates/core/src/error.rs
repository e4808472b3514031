use thiserror::Error;

use crate::constraints::StructureKind;

/// Errors produced anywhere in the recovery toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid radius {0}: must be positive")]
    InvalidRadius(f64),

    #[error("invalid sparsity budget {budget} for dimension {n}")]
    InvalidBudget { budget: usize, n: usize },

    #[error("structure function {0} is not supported by this operation")]
    UnsupportedKind(StructureKind),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient samples: got {got}, need at least {min}")]
    InsufficientSamples { got: usize, min: usize },

    /// The rate `rho` reached or exceeded one, so `1 - rho > 0` fails.
    #[error("sample budget below threshold: rho = {rho} >= 1")]
    SampleBudget { rho: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
