use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Array or matrix dimensions do not match what the structure requires.
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a representation: {0}")]
    Representation(String),
    #[error("sequence is not exact: {0}")]
    Exactness(String),
    #[error("cochain is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("not a section: {0}")]
    Section(String),
    #[error("basis error: {0}")]
    Basis(String),
    /// Input failed a structural validation (crossed module, strict Lie 2-algebra, ...).
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("unsupported structure: {0}")]
    Unsupported(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("invalid argument: {0}")]
    Argument(String),
}
