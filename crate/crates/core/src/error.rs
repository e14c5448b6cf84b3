use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The parameter set is valid but the requested computation does not apply to it
    /// (e.g. the same-position limit with distinct starting positions).
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Closed-form correlation formulas require maximally mixed marginals.
    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep its rendered message.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(IoError(e.to_string()))
    }
}

impl Error {
    /// Process exit code: 2 for usage/parse errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Config(_) => 2,
            _ => 1,
        }
    }
}
