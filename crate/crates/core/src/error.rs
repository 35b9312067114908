use thiserror::Error;

/// Library-wide error type.
///
/// `Domain` and `RankDeficient` signal bad inputs; the remaining variants
/// signal internal consistency violations that must never be silenced
/// (they are the designated detectors for recursion or packaging bugs).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),

    #[error("unsupported-recursion-state: {0}")]
    UnsupportedRecursionState(String),

    #[error("universality-violation: {0}")]
    UniversalityViolation(String),

    #[error("integrality failure: {0}")]
    NonInteger(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that indicate the artifact itself is inconsistent,
    /// as opposed to a caller passing bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedRecursionState(_)
                | Error::UniversalityViolation(_)
                | Error::NonInteger(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
