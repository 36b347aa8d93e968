use thiserror::Error;

/// Errors raised by the Weingarten engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WgError {
    #[error("invalid {what}: {reason}")]
    Parse { what: &'static str, reason: String },

    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("precondition failed in {op}: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("dimension argument {dim} is out of range for level {k}: {reason}")]
    DimensionOutOfRange { dim: i64, k: usize, reason: String },

    #[error("singular linear system at level {level} (dimension argument {dim})")]
    Singular { level: usize, dim: String },

    #[error("path enumeration exceeded the cap of {cap} paths")]
    CapExceeded { cap: usize },

    #[error("not a monotone factorization: {0}")]
    NotMonotone(String),

    #[error("factorization does not multiply to the target: {0}")]
    ProductMismatch(String),

    #[error("rational reconstruction exceeded the total degree cap {cap}")]
    DegreeCapExceeded { cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cache corruption at line {line}: {reason}")]
    CacheCorruption { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for WgError {
    fn from(e: std::io::Error) -> Self {
        WgError::Io(e.to_string())
    }
}

pub type Result<T, E = WgError> = std::result::Result<T, E>;
