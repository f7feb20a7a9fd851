use thiserror::Error;

use crate::quantize::MpPair;

/// Errors raised by distribution construction, solvers and data ingestion.
#[derive(Debug, Error)]
pub enum Error {
    /// A distribution or configuration parameter is outside its admissible range.
    #[error("{0}")]
    InvalidParameter(String),

    /// A function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sample cannot host a two-point quantizer.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("no closed form for {0}")]
    NoClosedForm(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A solver could not certify a stationary point. `best` carries the best
    /// candidate seen, if any.
    #[error("solver failed: {reason}")]
    SolveFailed {
        reason: String,
        best: Option<Box<MpPair>>,
    },

    #[error("unknown {kind} `{name}` (known: {known})")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },

    /// Malformed input data, with the 1-based line number when known.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn solve_failed(reason: impl Into<String>, best: Option<MpPair>) -> Self {
        Error::SolveFailed {
            reason: reason.into(),
            best: best.map(Box::new),
        }
    }

    /// True for failures of a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::SolveFailed { .. } | Error::NoClosedForm(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
