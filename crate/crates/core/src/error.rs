use thiserror::Error;

/// Errors raised by the engine.
///
/// Every variant belongs to one of three classes, see [`Error::class`]:
/// bad input, an exhausted resource (enumeration cap or degree window),
/// or a broken internal invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("bimodule mismatch: {0}")]
    BimoduleMismatch(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("degree {degree} outside window [{lo}, {hi}]")]
    DegreeOutOfWindow { degree: i64, lo: i64, hi: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: String, cap: u64 },
    #[error("window insufficient: {0}")]
    WindowLimited(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Resource,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::CapExceeded { .. } | Error::WindowLimited(_) => ErrorClass::Resource,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, needed: impl ToString, cap: u64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed: needed.to_string(),
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
