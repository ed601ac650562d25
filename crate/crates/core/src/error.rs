use thiserror::Error;

/// Errors raised by the simulation and statistics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller-supplied value violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Data has no spread (zero variance) where a spread is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A KL term is undefined because the model density vanishes on a populated bin.
    #[error("divergence undefined: model density is zero at z = {z} where the empirical density is {q}")]
    DivergenceUndefined { z: f64, q: f64 },

    /// An internal numerical consistency check failed.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
