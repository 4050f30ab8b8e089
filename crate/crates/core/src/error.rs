use thiserror::Error;

/// Errors raised by validation and by the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid function has {found} samples, grid expects {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite sample at node {0}")]
    NonFinite(usize),

    #[error("fractional order {0} outside (0, 1]")]
    InvalidOrder(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("boundary value at {side} is {value}, expected 0")]
    BoundaryNotZero { side: &'static str, value: f64 },

    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),

    #[error("mountain-pass geometry not found: {0}")]
    Geometry(String),

    #[error("path maximizer collapsed onto an endpoint (index {0})")]
    PathCollapse(usize),

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("linear algebra failure: {0}")]
    Linear(String),
}

pub type Result<T> = std::result::Result<T, Error>;
