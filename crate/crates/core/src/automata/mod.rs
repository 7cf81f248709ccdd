//! One-way finite automata: representations, canonical forms, Boolean
//! operations, exact comparison and graph utilities.

pub mod dfa;
pub mod json;
pub mod nfa;
pub mod ops;
pub mod regex;
pub mod scc;

pub use dfa::Dfa;
pub use nfa::{Nfa, StateId};
pub use ops::{
    combine, compare, complement, enumerate_words, equivalent, is_empty_language, to_minimal_dfa,
    BoolOp, CompareMode, Comparison,
};
pub use regex::{parse_regex, Regex};
pub use scc::{strongly_connected_components, Components};

/// `trim` as a free function, matching the other operations.
pub fn trim(a: &Nfa) -> Nfa {
    a.trim()
}

pub fn reverse(a: &Nfa) -> Nfa {
    a.reverse()
}
