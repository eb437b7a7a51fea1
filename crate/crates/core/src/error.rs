use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value {value} produced at node {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field lives on a different grid than the kernel")]
    GridMismatch,

    #[error("node {index} is not an interior node of a grid with {num_cells} cells")]
    BoundaryNode { index: usize, num_cells: usize },

    #[error("descent stagnated at iteration {iteration}: step fell below {min_step:e} without energy decrease")]
    Stagnation { iteration: usize, min_step: f64 },

    #[error("NaN encountered in gradient at iteration {iteration}")]
    Numerical { iteration: usize, iterate: Vec<f64> },

    #[error("every start of the constrained minimisation failed: {0}")]
    AllStartsFailed(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
