//! Crate-wide error type.

use crate::series::{Frequency, Period};

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series too short for {what}: have {got} values, need at least {need}")]
    InsufficientData {
        what: &'static str,
        need: usize,
        got: usize,
    },

    #[error("non-finite value at {period}")]
    NonFinite { period: Period },

    #[error("non-positive level value {value} at {period}; log growth rate undefined")]
    NonPositiveLevel { period: Period, value: f64 },

    #[error("frequency mismatch: {left:?} vs {right:?}")]
    FrequencyMismatch { left: Frequency, right: Frequency },

    #[error("spans differ: {detail}")]
    SpanMismatch { detail: String },

    #[error("requested span not covered: {detail}")]
    Coverage { detail: String },

    #[error("segment starting at {at} has {len} periods, need at least {need}")]
    SegmentTooShort { at: String, len: usize, need: usize },

    #[error("break window exceeds the usable data span: {detail}")]
    WindowOutOfSpan { detail: String },

    #[error("degenerate fit: {detail}")]
    DegenerateFit { detail: String },

    #[error("design matrix is rank deficient (dependent columns: {columns:?})")]
    RankDeficient { columns: Vec<usize> },

    #[error("observed series has zero variance; R^2 undefined")]
    ZeroVariance,

    #[error("empty overlap between series")]
    EmptyOverlap,

    #[error("window {from}..{to} is empty after alignment")]
    EmptyWindow { from: Period, to: Period },

    #[error("collinear inputs: {detail}")]
    Collinear { detail: String },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: usize,
        message: String,
    },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("task `{task}` failed: {message}")]
    Task { task: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
