use thiserror::Error;

use crate::SeqIndex;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A request exceeds a configured capacity (memory budget, enumeration
    /// cap, index width or schedule reach).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A table lookup outside the precomputed range.
    #[error("index {index} outside table range 1..={limit}")]
    Range { index: SeqIndex, limit: u64 },

    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter schedule that breaks one of its admissibility constraints.
    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a
    /// runtime limit.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Schedule(_) | Error::Parse(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
