use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    /// The interaction matrix is not positive definite: the model is over-coupled.
    #[error(
        "NonPositiveSpectrum: smallest eigenvalue {min_eigenvalue:e} is not above \
         {threshold:e} (relative threshold times largest magnitude)"
    )]
    NonPositiveSpectrum { min_eigenvalue: f64, threshold: f64 },

    #[error("NoConvergence: off-diagonal norm {off_norm:e} after {sweeps} Jacobi sweeps")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("IndexOutOfRange: index {index} not in 0..{dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("DimensionMismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Overflow: {0}")]
    Overflow(String),

    #[error("ConfigError: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
