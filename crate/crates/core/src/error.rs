use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid knots: {0}")]
    InvalidKnots(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error("invalid generators: {0}")]
    InvalidGenerators(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
