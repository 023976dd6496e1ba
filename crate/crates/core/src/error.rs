use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, violated precondition).
    #[error("invalid input: {0}")]
    Input(String),
    /// A construction collapsed: zero functional, anchor inside the subspace, etc.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// The convex set has no interior point.
    #[error("empty set: {0}")]
    EmptySet(String),
    /// The linear-programming or search backend failed to produce an answer.
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Degenerate(_) => "degenerate",
            Error::EmptySet(_) => "empty_set",
            Error::Solver(_) => "solver",
        }
    }
}
