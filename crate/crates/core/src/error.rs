use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },

    #[error("{what} exceeds limit {limit}")]
    LimitExceeded { what: String, limit: u64 },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),

    #[error("automaton is not ordered")]
    Unordered,

    #[error("no ordered automaton recognizes {0}")]
    NotOrderedLanguage(String),

    #[error("malformed automaton: {0}")]
    MalformedDfa(String),

    #[error("unsupported order kind: {0}")]
    UnsupportedOrder(String),

    #[error("unsupported category: {0}")]
    UnsupportedCategory(String),

    #[error("malformed morphism word {word:?}: {reason}")]
    MalformedWord { word: String, reason: String },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rational fit failed: {0}")]
    FitFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("denominator factor not of the form 1 - j*t: {0}")]
    BadDenominator(String),

    #[error("grammar has non-terminating derivations: {0}")]
    NonTerminating(String),

    #[error("element is not in the module: {0}")]
    NotInModule(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn limit(what: impl Into<String>, limit: u64) -> Self {
        Error::LimitExceeded {
            what: what.into(),
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
