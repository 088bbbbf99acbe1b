//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Operands were built over different variable spaces.
    #[error("variable space mismatch: {0}")]
    SpaceMismatch(String),

    /// Malformed input (bad rational, unknown variable, dimension error, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parse error with source position, for the text front ends.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// Bounded rational point search failed; this is not a proof of emptiness.
    #[error("no rational witness point found within the search bounds")]
    NoRationalWitness,

    /// A closure step needed multiplicative relations among eigenvalues that
    /// are outside the rational / finite-order fragment handled here.
    #[error("unsupported eigenvalues: {0}")]
    UnsupportedEigenvalues(String),

    /// The scoped component splitter could not certify an irreducible
    /// decomposition.
    #[error("component splitting incomplete: {0}")]
    ComponentSplitIncomplete(String),

    /// An operation that requires invertibility was given a singular matrix.
    #[error("singular matrix where an invertible one is required")]
    SingularMatrix,
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::SpaceMismatch(msg.into())
    }
}
