use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision exceeded: index {requested} requested but only {available} fractional digits are available")]
    PrecisionExceeded { requested: u64, available: u64 },

    #[error("digit layout with {int_bits} integer bits is not supported here (need exactly one)")]
    LayoutUnsupported { int_bits: u8 },

    #[error("range [{lo}, {hi}] is invalid for a sequence of length {len}")]
    Range { lo: u64, hi: u64, len: u64 },

    #[error("radicand must be positive")]
    ZeroRadicand,

    #[error("expected radicand {expected}, found {found}")]
    RadicandMismatch { expected: u64, found: u64 },

    #[error("invalid interval partition: {0}")]
    InvalidPartition(String),

    #[error("pattern must be a non-empty string of 0/1 characters")]
    BadPattern,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("malformed digit cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
