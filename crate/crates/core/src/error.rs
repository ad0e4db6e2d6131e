use thiserror::Error;

/// Errors raised by the library. Each variant carries a human-readable diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HankelError {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Configured resource cap exceeded (e.g. monomial count).
    #[error("resource limit: {0}")]
    Resource(String),

    /// Linear system too ill-conditioned for the requested accuracy.
    #[error("conditioning error: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, HankelError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HankelError::Domain(msg.into()))
}
