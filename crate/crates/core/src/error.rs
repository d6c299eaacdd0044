use thiserror::Error;

use crate::fcomplex::Violation;

/// Errors raised by the library.
///
/// The CLI maps malformed input ([`Error::is_input_error`]) to exit code 2
/// and everything else to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid interval: need a < b, got a = {a}, b = {b}")]
    InvalidInterval { a: String, b: String },
    #[error("polynomial does not vanish at t = 1 (value {0})")]
    NotInIdeal(i64),
    #[error("parameter must be {expected}, got {got}")]
    BadParameter { expected: &'static str, got: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field mismatch: characteristic {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("invalid filtered complex: {}", format_violations(.0))]
    InvalidComplex(Vec<Violation>),
    #[error("invalid filtered chain map: {0}")]
    InvalidMap(String),
    #[error("duplicate generator id `{0}`")]
    DuplicateId(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("inconsistent pairing table: {0}")]
    InconsistentTable(String),
    #[error("barcode has infinite bars")]
    InfiniteBars,
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Malformed input, as opposed to a well-formed input the operation rejects.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Schema(_) | Error::DuplicateId(_) | Error::UnknownGenerator(_)
        )
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
