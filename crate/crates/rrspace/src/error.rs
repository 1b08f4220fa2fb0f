use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("unknown place: {0}")]
    UnknownPlace(String),
    #[error("MaxMin search did not reach the required index at {0}")]
    MaxMinIncomplete(String),
    #[error("field of size {size} is too small for a curve of degree {degree}")]
    FieldTooSmall { size: u128, degree: usize },
    #[error("curve is not irreducible")]
    NotIrreducible,
    #[error("polynomial is not monic in x")]
    NotMonic,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("p-adic precision cap {0} exceeded")]
    PrecisionCap(usize),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::SingularMatrix => "singular_matrix",
            Error::ContractViolation(_) => "contract_violation",
            Error::UnknownPlace(_) => "unknown_place",
            Error::MaxMinIncomplete(_) => "maxmin_incomplete",
            Error::FieldTooSmall { .. } => "field_too_small",
            Error::NotIrreducible => "not_irreducible",
            Error::NotMonic => "not_monic",
            Error::Syntax { .. } => "syntax",
            Error::PrecisionCap(_) => "precision_cap",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
