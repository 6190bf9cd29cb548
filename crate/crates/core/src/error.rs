use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("host graph has {n} vertices but the pattern needs {f}")]
    HostTooSmall { n: usize, f: usize },

    #[error("host graph has no vertices")]
    EmptyHost,

    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("part index {index} out of range for a kernel with {k} parts")]
    PartOutOfRange { index: usize, k: usize },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernels have different part weights")]
    WeightMismatch,

    #[error("graphs have different vertex counts ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("pattern has {f} vertices, at most {max} supported here")]
    PatternTooLarge { f: usize, max: usize },

    #[error("unknown built-in pattern `{0}`")]
    UnknownPattern(String),

    #[error("exact count could overflow 128-bit arithmetic ({n}^{f})")]
    CountOverflow { n: usize, f: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing vertex count")]
    MissingHeader,
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("vertex {vertex} out of range 0..{n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0} {1}")]
    Duplicate(usize, usize),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
