use thiserror::Error;

use crate::two_way::Diagnostic;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("alphabet contains duplicate letter '{0}'")]
    DuplicateLetter(char),

    #[error("'{0}' is reserved and cannot be an alphabet letter")]
    ReservedLetter(char),

    #[error("letter '{0}' is not part of the alphabet")]
    UnknownLetter(char),

    #[error("regex syntax error at position {position}: {message}")]
    RegexSyntax { position: usize, message: String },

    #[error("automata are over different alphabets")]
    AlphabetMismatch,

    #[error("automaton is not complete")]
    NotComplete,

    #[error("automaton is not deterministic")]
    NotDeterministic,

    #[error("automaton is not weak")]
    NotWeak,

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid two-way automaton: {}", format_diagnostics(.0))]
    InvalidTwoWay(Vec<Diagnostic>),

    #[error("{what} has {size} elements, above the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("term syntax error at position {position}: {message}")]
    TermSyntax { position: usize, message: String },

    #[error("variable '{0}' is not bound by the assignment")]
    UnboundVariable(char),

    #[error("ranker syntax error: {0}")]
    RankerSyntax(String),

    #[error("monomial extraction failed: {0}")]
    Extraction(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
