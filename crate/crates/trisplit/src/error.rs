//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by grid operations, solvers, and the decomposition driver.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation (non-positive weight, bad dimension, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two grids that must share a shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The iteration produced a non-finite value.
    #[error("divergence: non-finite value encountered at iteration {iteration}")]
    Divergence { iteration: usize },

    /// A per-frequency symbol matrix is singular (should not happen for
    /// valid parameters; checked at build time).
    #[error("singular symbol matrix at frequency ({i}, {j}), |det| = {det_mag:.3e}")]
    SingularSymbol { i: usize, j: usize, det_mag: f64 },

    /// A dense oracle solve hit a singular matrix.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// Image file I/O failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Io(e.to_string())
    }
}
