use thiserror::Error;

/// Failure modes shared by every module.
///
/// Mathematical predicates that merely evaluate to `false` are data, not
/// errors; `Internal` is reserved for two independent computations of the
/// same fact disagreeing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("closure exceeded the size cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("ill-conditioned Gram matrix: eigenvalue {eigenvalue:e} lies in the rejection band")]
    Conditioning { eigenvalue: f64 },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for failures that indicate a broken mathematical assertion rather
    /// than bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Precondition(_) => "precondition",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Conditioning { .. } => "conditioning",
            Error::Parse { .. } => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
