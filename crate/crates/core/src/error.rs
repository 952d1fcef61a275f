use thiserror::Error;

/// Errors raised by the library. The variants map onto CLI exit codes:
/// domain-type problems exit with 1, resource problems with 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(String),

    #[error("invalid quadratic form: {0}")]
    InvalidForm(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by running out of some configured budget
    /// (precision retries, caps, enumeration sizes).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::Precision(_) | Error::NotFound(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
