use thiserror::Error;

/// Errors raised by the numerics and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries for a square matrix, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operation requires dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("Bloch vector has norm {0} > 1")]
    InvalidBloch(f64),

    #[error("{0}")]
    Domain(String),

    #[error("Kim bound is indeterminate at x = {0} (|1 - 2x| < 1e-4)")]
    IndeterminateAtHalf(f64),

    #[error("states are indistinguishable (trace distance {0:e})")]
    DegenerateProblem(f64),

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
