use std::collections::HashMap;

use crate::alphabet::Word;
use crate::automata::dfa::Dfa;
use crate::automata::nfa::{Nfa, StateId};
use crate::error::{Error, Result};

/// Complete minimal DFA with canonical (BFS) state numbering.
pub fn to_minimal_dfa(a: &Nfa) -> Dfa {
    a.determinize().minimize()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

impl BoolOp {
    fn apply(self, x: bool, y: bool) -> bool {
        match self {
            BoolOp::Union => x || y,
            BoolOp::Intersection => x && y,
            BoolOp::Difference => x && !y,
        }
    }
}

/// Product construction over the completions of `x` and `y`; only accessible
/// pairs are built.
pub fn combine(x: &Dfa, y: &Dfa, op: BoolOp) -> Result<Dfa> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let (x, y) = (x.complete(), y.complete());
    let k = x.alphabet().len();
    let start = (
        x.initial().expect("complete"),
        y.initial().expect("complete"),
    );
    let mut index = HashMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let next = (
                x.step(p, a).expect("complete"),
                y.step(q, a).expect("complete"),
            );
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            row.push(Some(id));
        }
        delta.push(row);
        i += 1;
    }
    let finals = pairs
        .iter()
        .map(|&(p, q)| op.apply(x.is_final(p), y.is_final(q)))
        .collect();
    Dfa::new(x.alphabet().clone(), delta, Some(0), finals)
}

pub fn complement(x: &Dfa) -> Result<Dfa> {
    x.complement()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    Equivalent,
    /// `L(x) ⊆ L(y)`
    Included,
}

/// Outcome of [`compare`]; on failure carries the shortlex-least witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub holds: bool,
    pub counterexample: Option<Word>,
}

/// Exact language comparison. BFS over the product of the two subset
/// automata visits pairs in shortlex order of their access words, so the
/// first bad pair found gives the shortlex-least counterexample.
pub fn compare(x: &Nfa, y: &Nfa, mode: CompareMode) -> Result<Comparison> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let (dx, dy) = (x.determinize(), y.determinize());
    let bad = |p: StateId, q: StateId| match mode {
        CompareMode::Equivalent => dx.is_final(p) != dy.is_final(q),
        CompareMode::Included => dx.is_final(p) && !dy.is_final(q),
    };
    let start = (0, 0);
    // pair -> (parent index, letter)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut pairs = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut i = 0;
    let witness = |mut j: usize, parent: &[Option<(usize, usize)>]| {
        let mut w = Vec::new();
        while let Some((p, a)) = parent[j] {
            w.push(a);
            j = p;
        }
        w.reverse();
        Word(w)
    };
    if bad(0, 0) {
        return Ok(Comparison {
            holds: false,
            counterexample: Some(Word::empty()),
        });
    }
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for a in x.alphabet().iter() {
            let next = (
                dx.step(p, a).expect("complete"),
                dy.step(q, a).expect("complete"),
            );
            if index.contains_key(&next) {
                continue;
            }
            index.insert(next, pairs.len());
            pairs.push(next);
            parent.push(Some((i, a)));
            if bad(next.0, next.1) {
                return Ok(Comparison {
                    holds: false,
                    counterexample: Some(witness(pairs.len() - 1, &parent)),
                });
            }
        }
        i += 1;
    }
    Ok(Comparison {
        holds: true,
        counterexample: None,
    })
}

pub fn equivalent(x: &Nfa, y: &Nfa) -> Result<bool> {
    compare(x, y, CompareMode::Equivalent).map(|c| c.holds)
}

pub fn is_empty_language(x: &Nfa) -> bool {
    let co = x.coaccessible_states();
    !x.initial().iter().any(|&q| co[q])
}

/// Accepted words of length at most `max_len`, in shortlex order.
pub fn enumerate_words(a: &Nfa, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level: Vec<(Vec<usize>, Vec<bool>)> = vec![(Vec::new(), a.initial_set())];
    for len in 0..=max_len {
        for (w, set) in &level {
            if set.iter().enumerate().any(|(q, &b)| b && a.is_final(q)) {
                out.push(Word(w.clone()));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, set) in &level {
            for l in a.alphabet().iter() {
                let s = a.step_set(set, l);
                if s.contains(&true) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, s));
                }
            }
        }
        level = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::regex::parse_regex;

    fn abc(s: &str) -> Alphabet {
        Alphabet::from_letters(s).unwrap()
    }

    #[test]
    fn shortest_counterexample() {
        let ab = abc("ab");
        let x = parse_regex("ab(a|b)*", &ab).unwrap();
        let y = parse_regex("a(a|b)*", &ab).unwrap();
        let c = compare(&x, &y, CompareMode::Equivalent).unwrap();
        assert!(!c.holds);
        // brute force: first word in shortlex order on which the two disagree
        let first = ab
            .words_up_to(4)
            .into_iter()
            .find(|w| x.accepts(w.letters()) != y.accepts(w.letters()))
            .unwrap();
        assert_eq!(ab.render(first.letters()), "a");
        assert_eq!(c.counterexample, Some(first));
        assert!(compare(&x, &y, CompareMode::Included).unwrap().holds);
        let back = compare(&y, &x, CompareMode::Included).unwrap();
        assert_eq!(ab.render(back.counterexample.unwrap().letters()), "a");
        assert!(compare(&x, &x, CompareMode::Equivalent).unwrap().holds);
    }

    #[test]
    fn epsilon_counterexample() {
        let ab = abc("ab");
        let x = parse_regex("%e", &ab).unwrap();
        let y = parse_regex("%0", &ab).unwrap();
        let c = compare(&x, &y, CompareMode::Equivalent).unwrap();
        assert_eq!(c.counterexample, Some(Word::empty()));
    }

    #[test]
    fn alphabet_mismatch() {
        let x = parse_regex("a", &abc("ab")).unwrap();
        let y = parse_regex("a", &abc("a")).unwrap();
        assert_eq!(
            compare(&x, &y, CompareMode::Equivalent),
            Err(Error::AlphabetMismatch)
        );
        assert_eq!(
            combine(&x.determinize(), &y.determinize(), BoolOp::Union),
            Err(Error::AlphabetMismatch)
        );
    }

    #[test]
    fn enumeration() {
        let ab = abc("ab");
        let x = parse_regex("ab(a|b)*", &ab).unwrap();
        let words: Vec<_> = enumerate_words(&x, 3)
            .iter()
            .map(|w| ab.render(w.letters()))
            .collect();
        assert_eq!(words, ["ab", "aba", "abb"]);
        assert!(enumerate_words(&parse_regex("%0", &ab).unwrap(), 5).is_empty());
        let a = abc("a");
        let star = parse_regex("a*", &a).unwrap();
        assert_eq!(enumerate_words(&star, 2).len(), 3);
    }
}
