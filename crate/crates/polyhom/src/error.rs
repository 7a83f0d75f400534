use polyhom_core::{AbelianizeError, CategoryError, CellError, HomalgError, RewriteError, SliceError};
use thiserror::Error;

/// Everything the command line can fail with, grouped by exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Invalid(String),
    #[error("comparison mismatch: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Capability(String),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    /// 1 mismatch, 2 validation, 3 parse, 4 truncation or capability.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Mismatch(_) => 1,
            Error::Invalid(_) => 2,
            Error::Parse(_) | Error::Io { .. } => 3,
            Error::Capability(_) => 4,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<CellError> for Error {
    fn from(e: CellError) -> Self {
        Error::Invalid(e.to_string())
    }
}

impl From<CategoryError> for Error {
    fn from(e: CategoryError) -> Self {
        match e {
            CategoryError::UnsupportedDegree(_) => Error::Capability(e.to_string()),
            CategoryError::NerveMismatch(_) => Error::Mismatch(e.to_string()),
            _ => Error::Invalid(e.to_string()),
        }
    }
}

impl From<HomalgError> for Error {
    fn from(e: HomalgError) -> Self {
        match e {
            HomalgError::Truncated { .. } | HomalgError::OutOfRange { .. } => Error::Capability(e.to_string()),
            _ => Error::Invalid(e.to_string()),
        }
    }
}

impl From<AbelianizeError> for Error {
    fn from(e: AbelianizeError) -> Self {
        match e {
            AbelianizeError::Invalid(v) => {
                Error::Invalid(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
            }
            AbelianizeError::Cell(c) => c.into(),
            AbelianizeError::Truncation { .. } => Error::Capability(e.to_string()),
            AbelianizeError::Homalg(h) => h.into(),
        }
    }
}

impl From<RewriteError> for Error {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::Bound(_) => Error::Capability(e.to_string()),
            RewriteError::Category(c) => c.into(),
            _ => Error::Invalid(e.to_string()),
        }
    }
}

impl From<SliceError> for Error {
    fn from(e: SliceError) -> Self {
        match e {
            SliceError::Invalid(v) => {
                Error::Invalid(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
            }
            SliceError::Cell(c) => c.into(),
            SliceError::Category(c) => c.into(),
            SliceError::Reassembly(_) | SliceError::Colimit(_) | SliceError::Identification(_) => {
                Error::Mismatch(e.to_string())
            }
            _ => Error::Invalid(e.to_string()),
        }
    }
}
