use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A configured computation budget ran out.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// The operation is not supported for this input (for example it needs
    /// a finite free base change).
    #[error("not supported: {0}")]
    Capability(String),
    /// A computation that must succeed by theory did not; usually a false
    /// flatness declaration.
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
