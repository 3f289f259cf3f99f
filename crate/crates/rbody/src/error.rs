use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("no such ball: {0}")]
    NoSuchBall(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("witness not found: {0}")]
    WitnessNotFound(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("lattice mismatch: {0}")]
    MismatchedLattice(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
