use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the toolkit.
///
/// Callers that need a coarse classification (the CLI maps these to exit
/// codes) use [`Error::class`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid schema for relation `{rel}`: {reason}")]
    Schema { rel: String, reason: String },

    #[error("instance of `{rel}` does not match its schema: {reason}")]
    SchemaMismatch { rel: String, reason: String },

    #[error("fact `{fact_id}` appears under relation types `{first}` and `{second}`")]
    InconsistentFactGroup {
        fact_id: String,
        first: String,
        second: String,
    },

    #[error("vertex `{0}` is not in the graph")]
    UnknownVertex(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown relation type `{0}`")]
    UnknownRelation(String),

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("role mismatch for relation `{rel}`: {reason}")]
    RoleMismatch { rel: String, reason: String },

    #[error("no pair parameters for relation `{rel}` and roles ({first}, {second})")]
    MissingPairParams {
        rel: String,
        first: String,
        second: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("entity pool is empty")]
    EmptyPool,

    #[error("model and protocol are incompatible: {0}")]
    Incompatible(String),

    #[error("true entity `{0}` is not among the candidates")]
    TruthNotCandidate(String),

    #[error("query record for relation `{0}` carries no fold provenance")]
    MissingProvenance(String),

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("unsupported model file version {found} (expected {expected})")]
    Version { found: String, expected: u32 },

    #[error("model file is truncated: {0}")]
    Truncated(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse error category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::Incompatible(_) => ErrorClass::Usage,
            Error::NonFinite(_) => ErrorClass::Numeric,
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
