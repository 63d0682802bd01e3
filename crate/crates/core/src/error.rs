use thiserror::Error;

/// Errors raised across the discretisation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("node sequence must be strictly increasing and span [-1, 1]")]
    InvalidNodes,
    #[error("unsupported polynomial order {0}")]
    UnsupportedOrder(usize),
    #[error("geometry map is singular or orientation-reversing at ({x}, {y}): det J = {det}")]
    SingularMap { x: f64, y: f64, det: f64 },
    #[error("linear system is singular (zero pivot at row {0})")]
    SingularSystem(usize),
    #[error("solver failed: {0}")]
    SolverFailure(String),
    #[error("inverse map did not converge for point ({0}, {1})")]
    InverseMapFailure(f64, f64),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
