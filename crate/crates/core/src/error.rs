use thiserror::Error;

use crate::scalar::Backend;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: Backend, right: Backend },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("spectrum is not Gaussian-rational ({found} of {degree} eigenvalues found); use the float64 backend")]
    SpectralIrrationality { found: usize, degree: usize },

    #[error("not an eigenvalue: {0}")]
    NotAnEigenvalue(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {message} (residual {residual:e})")]
    Numerical { message: String, residual: f64 },

    #[error("invalid tolerance: {0}")]
    Tolerance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Float-side failures that reflect conditioning rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
