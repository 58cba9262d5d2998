use thiserror::Error;

/// Errors reported by the analytical and simulation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to converge or lost too much precision.
    #[error("numerical error: {0}")]
    Numeric(String),

    /// A solver was asked for a solution outside its search range.
    #[error("range error: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
