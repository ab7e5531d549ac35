//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input value violates a precondition (non-unit vector, asymmetric
    /// matrix, dimension mismatch).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Gram-Schmidt could not produce a new independent direction after the
    /// retry budget was exhausted.
    #[error("frame construction degenerate: {0}")]
    DegenerateFrame(String),

    /// A run configuration could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
