//! Decision procedures for the ideal structure of regular languages, and
//! conversions between the automaton models that characterize it.

pub mod alphabet;
pub mod automata;
pub mod bitset;
pub mod classification;
pub mod constructions;
pub mod error;
pub mod identities;
pub mod monoid;
pub mod random;
pub mod two_way;

pub use alphabet::{Alphabet, Letter, Word};
pub use error::{Error, Result};
