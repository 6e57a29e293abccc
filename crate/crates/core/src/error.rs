use thiserror::Error;

/// Errors raised by the solver and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two particles sit on a coincidence set where a gauge object is undefined.
    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("matrix assembly failed: {0}")]
    Assembly(String),

    #[error("eigensolver did not converge: {0}")]
    NotConverged(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
