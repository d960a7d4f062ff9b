use thiserror::Error;

use crate::framework::DeterminationViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol {symbol:?} in input {input:?} (expected 0 or 1)")]
    InvalidSymbol { symbol: char, input: String },

    #[error("determination condition violated: {0}")]
    Determination(DeterminationViolation),

    #[error("budget must be at least 1")]
    ZeroBudget,

    #[error("input of length {len} exceeds the brute-force guard of {max}")]
    DeskScaleGuard { len: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("inconsistent snapshot: {0}")]
    SnapshotConsistency(String),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
