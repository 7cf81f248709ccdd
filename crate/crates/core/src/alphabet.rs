//! Alphabets and words.
//!
//! Letters are stored as dense indices into the owning [`Alphabet`]; the
//! alphabet order is the order used everywhere a canonical traversal is
//! needed (BFS renumbering, shortlex enumeration).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
pub type Letter = usize;

/// Symbols reserved for the end markers of two-way automata.
pub const LEFT_MARKER: char = '>';
pub const RIGHT_MARKER: char = '<';

/// Ordered finite set of single-character letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for &c in &letters {
            if c == LEFT_MARKER || c == RIGHT_MARKER {
                return Err(Error::ReservedLetter(c));
            }
            if !seen.insert(c) {
                return Err(Error::DuplicateLetter(c));
            }
        }
        Ok(Self { letters })
    }

    /// Parses an alphabet written as a string of letters, e.g. `"abc"`.
    pub fn from_letters(s: &str) -> Result<Self> {
        Self::new(s.chars().filter(|c| !c.is_whitespace()))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn char_of(&self, letter: Letter) -> char {
        self.letters[letter]
    }

    pub fn index_of(&self, c: char) -> Result<Letter> {
        self.letters
            .iter()
            .position(|&l| l == c)
            .ok_or(Error::UnknownLetter(c))
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> {
        0..self.letters.len()
    }

    /// Parses a word over this alphabet. Whitespace is not allowed inside words.
    pub fn word(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| self.index_of(c))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.letters[l]).collect()
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_len(&self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    self.iter().map(move |a| {
                        let mut v = w.0.clone();
                        v.push(a);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|n| self.words_of_len(n)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Finite word over some alphabet, stored as letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The letter at 1-based position `i`, if `1 <= i <= |w|`.
    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        if i == 0 {
            None
        } else {
            self.0.get(i - 1).copied()
        }
    }

    /// The set of letters occurring in the word.
    pub fn alph(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Shortlex comparison: shorter words first, then lexicographic by letter index.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert_eq!(Alphabet::new([]), Err(Error::EmptyAlphabet));
        assert_eq!(
            Alphabet::from_letters("aba"),
            Err(Error::DuplicateLetter('a'))
        );
        assert_eq!(
            Alphabet::from_letters("a<"),
            Err(Error::ReservedLetter('<'))
        );
        assert_eq!(Alphabet::from_letters(">"), Err(Error::ReservedLetter('>')));
    }

    #[test]
    fn word_accessors() {
        let a = Alphabet::from_letters("abc").unwrap();
        let w = a.word("cab").unwrap();
        assert_eq!(w.letter_at(0), None);
        assert_eq!(w.letter_at(1), Some(2));
        assert_eq!(w.letter_at(3), Some(1));
        assert_eq!(w.letter_at(4), None);
        assert_eq!(w.alph(), [0, 1, 2].into_iter().collect());
        assert_eq!(a.render(w.letters()), "cab");
        assert_eq!(a.word("abd"), Err(Error::UnknownLetter('d')));
    }

    #[test]
    fn shortlex_enumeration() {
        let a = Alphabet::from_letters("ab").unwrap();
        let words: Vec<String> = a
            .words_up_to(2)
            .iter()
            .map(|w| a.render(w.letters()))
            .collect();
        assert_eq!(words, ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }
}
