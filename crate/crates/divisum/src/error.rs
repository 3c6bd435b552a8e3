use thiserror::Error;

/// Errors surfaced by every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The argument itself is malformed (out of range, zero where nonzero
    /// required, not squarefree where squarefree required, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A stated range condition on the inputs does not hold; the message
    /// names the violated condition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is outside the supported parameter family.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The request would exceed a built-in memory/time guard.
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    /// Process exit code used by the CLI: 2 for bad arguments, 3 for
    /// violated range preconditions and resource guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Unsupported(_) => 2,
            Error::Precondition(_) | Error::Resource(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
