//! Crate-wide error type.

use crate::exact::IntPoly;

/// Errors raised by the library.
///
/// Domain errors (everything except [`Error::BadInput`] and [`Error::Io`])
/// describe a mathematically meaningful rejection; the CLI maps them to exit
/// code 1, while `BadInput` and I/O problems map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("precision cap exceeded: {0}")]
    Precision(String),

    #[error("length error: {0}")]
    Length(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The linear part has an eigenvalue off the unit circle; the offending
    /// non-cyclotomic cofactor of the characteristic polynomial is carried.
    #[error("positive entropy: non-cyclotomic cofactor {cofactor}")]
    PositiveEntropy { cofactor: IntPoly },

    #[error("certificate search exceeded its bound: {0}")]
    CertSearchExceeded(String),

    /// A provably exact division produced a remainder; signals an
    /// implementation bug rather than a data problem.
    #[error("integrality violated: {0}")]
    Integrality(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Malformed user input: configs, flags, unparsable numbers.
    #[error("bad input: {0}")]
    BadInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for usage/config problems (CLI exit 2), false for domain errors
    /// (CLI exit 1).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::BadInput(_) | Error::Io(_))
    }

    /// Short machine-readable kind tag used in JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Capacity(_) => "capacity",
            Error::Precision(_) => "precision",
            Error::Length(_) => "length",
            Error::NotPrime(_) => "not_prime",
            Error::NotAutomorphism(_) => "not_automorphism",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::PositiveEntropy { .. } => "positive_entropy",
            Error::CertSearchExceeded(_) => "cert_search_exceeded",
            Error::Integrality(_) => "integrality",
            Error::InvalidPolynomial(_) => "invalid_polynomial",
            Error::Precondition(_) => "precondition",
            Error::Budget(_) => "budget",
            Error::BadInput(_) => "bad_input",
            Error::Io(_) => "io",
        }
    }
}
