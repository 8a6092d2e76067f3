use std::fmt;

use num_bigint::BigInt;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value violated a precondition; `field` names the offending input.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    /// Two operands live on ground sets of different sizes.
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    /// Two partitions that were required to be comparable are not.
    #[error("partitions are not comparable in refinement order: {0}")]
    NotComparable(String),

    /// An exact polynomial division left a remainder.
    #[error("polynomial not divisible, remainder {remainder}")]
    Divisibility { remainder: Remainder },

    /// An internal identity that must hold exactly was found to fail.
    #[error("identity failure: {0}")]
    Identity(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of exact identities (divisibility, consistency) as
    /// opposed to bad input.
    pub fn is_identity_failure(&self) -> bool {
        matches!(self, Error::Divisibility { .. } | Error::Identity(_))
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "validation",
            Error::SizeMismatch { .. } => "size-mismatch",
            Error::NotComparable(_) => "not-comparable",
            Error::Divisibility { .. } => "divisibility",
            Error::Identity(_) => "identity",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

/// Remainder of a failed exact division, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remainder(pub Vec<BigInt>);

impl fmt::Display for Remainder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
