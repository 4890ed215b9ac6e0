use thiserror::Error;

/// Errors produced by constructions, verifications and the CLI.
#[derive(Error, Debug)]
pub enum Error {
    /// Bad user-supplied parameters (CLI exit code 2).
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    /// Mathematically invalid input to an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hard cap was exceeded (CLI exit code 3).
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A search budget ran out before the traversal completed (CLI exit code 3).
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A claimed property failed to verify (CLI exit code 1).
    #[error("verification failed: {0}")]
    Verification(String),

    /// An internal consistency check failed; indicates a construction bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
