//! Shared error type for the numeric kernels and the certificate pipeline.

/// Errors reported by every fallible operation in this crate.
///
/// The variants map onto the caller-facing failure classes: bad inputs
/// (`Domain`), iteration/accuracy breakdowns (`Numeric`), structurally
/// invalid intermediate state (`InvalidState`), and checks that ran to
/// completion but refuted the claim being certified (`Verification`).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric procedure failed to converge or lost too much accuracy.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An input structure violates one of its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A verification pass completed and found the claimed property violated.
    #[error("verification failure: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    pub(crate) fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
