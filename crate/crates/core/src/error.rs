use thiserror::Error;

/// Errors raised by the engine.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end surfaces in its JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("semiring mismatch: {left} vs {right}")]
    SpecMismatch { left: String, right: String },

    #[error("semiring {0} is not naturally ordered")]
    NotOrdered(String),

    #[error("search space is infinite: {0}")]
    InfiniteSearch(String),

    #[error("operation not supported over semiring {0}")]
    UnsupportedSpec(String),

    #[error("syntax error at {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("relation {name} has arity {expected}, got {found} arguments")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown symbol {0}")]
    UnknownSymbol(String),

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("tuple length mismatch: {0}")]
    LengthMismatch(String),

    #[error("relation symbol {0} clashes with the structure vocabulary")]
    VocabularyClash(String),

    #[error("no value for team variable {0}")]
    MissingVariable(String),

    #[error("no substitution for indeterminate {0}")]
    MissingIndeterminate(String),

    #[error("no candidate in the repair space satisfies the constraints")]
    EmptySpace,

    #[error("invalid value literal {literal:?} for semiring {spec}")]
    InvalidValue { literal: String, spec: String },

    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpecMismatch { .. } => "SpecMismatch",
            Error::NotOrdered(_) => "NotOrdered",
            Error::InfiniteSearch(_) => "InfiniteSearch",
            Error::UnsupportedSpec(_) => "UnsupportedSpec",
            Error::Syntax { .. } => "SyntaxError",
            Error::Arity { .. } => "ArityError",
            Error::UnknownSymbol(_) => "UnknownSymbol",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::LengthMismatch(_) => "LengthMismatch",
            Error::VocabularyClash(_) => "VocabularyClash",
            Error::MissingVariable(_) => "MissingVariable",
            Error::MissingIndeterminate(_) => "MissingIndeterminate",
            Error::EmptySpace => "EmptySpace",
            Error::InvalidValue { .. } => "InvalidValue",
            Error::Input(_) => "InputError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
