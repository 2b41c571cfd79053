use thiserror::Error;

use crate::Term;

/// Every failure the library can report.
///
/// Display strings start with the variant name so that command-line users see
/// the same name the library uses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("HorizonExceeded: query {query} lies beyond the known horizon {horizon}")]
    HorizonExceeded { query: Term, horizon: Term },

    #[error("Overflow: {0}")]
    Overflow(String),

    #[error("UnknownSequence: {0}")]
    UnknownSequence(String),

    #[error("UnknownIdentity: {0}")]
    UnknownIdentity(String),

    #[error("ContradictionAtStart: {0}")]
    ContradictionAtStart(String),

    #[error("NoCandidate: no admissible value for index {index} in ({from}, {from} + {bound}]")]
    NoCandidate {
        index: Term,
        from: Term,
        bound: Term,
    },

    #[error("BacktrackExhausted: no consistent continuation at index {index}")]
    BacktrackExhausted { index: Term },

    #[error("Contradiction: {0}")]
    Contradiction(String),

    #[error("InvalidParameters: {0}")]
    InvalidParameters(String),

    #[error("NonMonotoneInput: term at index {index} does not exceed its predecessor")]
    NonMonotoneInput { index: Term },

    #[error("MissingRule: letter {0} has no image")]
    MissingRule(u32),

    #[error("InvalidRule: {0}")]
    InvalidRule(String),

    #[error("BFile: line {line}: {message}")]
    BFile { line: usize, message: String },

    #[error("Io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
