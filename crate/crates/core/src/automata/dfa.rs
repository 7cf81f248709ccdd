use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Letter};
use crate::automata::nfa::{Nfa, StateId};
use crate::error::{Error, Result};

/// Deterministic finite automaton with a partial transition function.
///
/// A DFA without states (and hence without an initial state) recognizes the
/// empty language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<Option<StateId>>>,
        initial: Option<StateId>,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let n = delta.len();
        if finals.len() != n {
            return Err(Error::Malformed(
                "final flags do not match state count".into(),
            ));
        }
        if n > 0 && initial.is_none() || n == 0 && initial.is_some() {
            return Err(Error::Malformed(
                "a non-empty DFA needs exactly one initial state".into(),
            ));
        }
        if let Some(q) = initial.filter(|&q| q >= n) {
            return Err(Error::UnknownState(q.to_string()));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::Malformed("transition row has wrong width".into()));
            }
            if let Some(q) = row.iter().flatten().find(|&&q| q >= n) {
                return Err(Error::UnknownState(q.to_string()));
            }
        }
        Ok(Self::from_parts(alphabet, delta, initial, finals))
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        delta: Vec<Vec<Option<StateId>>>,
        initial: Option<StateId>,
        finals: Vec<bool>,
    ) -> Self {
        Self {
            alphabet,
            delta,
            initial,
            finals,
        }
    }

    /// Builds a DFA from a deterministic NFA.
    pub fn from_nfa(nfa: &Nfa) -> Result<Self> {
        if nfa.num_states() == 0 {
            return Ok(Self::empty(nfa.alphabet().clone()));
        }
        if !nfa.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let delta = (0..nfa.num_states())
            .map(|q| {
                nfa.alphabet()
                    .iter()
                    .map(|a| nfa.successors(q, a).first().copied())
                    .collect()
            })
            .collect();
        let finals = (0..nfa.num_states()).map(|q| nfa.is_final(q)).collect();
        Ok(Self::from_parts(
            nfa.alphabet().clone(),
            delta,
            Some(nfa.initial()[0]),
            finals,
        ))
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self::from_parts(alphabet, Vec::new(), None, Vec::new())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn step(&self, q: StateId, a: Letter) -> Option<StateId> {
        self.delta[q][a]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, q)| q.map(|q| (p, a, q)))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().flatten().all(Option::is_some)
    }

    /// Runs from `q`; `None` if some transition is missing.
    pub fn run_from(&self, q: StateId, word: &[Letter]) -> Option<StateId> {
        word.iter().try_fold(q, |q, &a| self.delta[q][a])
    }

    pub fn run(&self, word: &[Letter]) -> Option<StateId> {
        self.run_from(self.initial?, word)
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.run(word).is_some_and(|q| self.finals[q])
    }

    pub fn to_nfa(&self) -> Nfa {
        Nfa::new(
            self.alphabet.clone(),
            self.num_states(),
            self.transitions(),
            self.initial,
            (0..self.num_states()).filter(|&q| self.finals[q]),
        )
        .expect("a DFA is a well-formed NFA")
    }

    /// Adds a non-final sink if some transition is missing. The empty DFA
    /// becomes a single non-final sink.
    pub fn complete(&self) -> Dfa {
        if self.is_complete() && self.initial.is_some() {
            return self.clone();
        }
        let sink = self.num_states();
        let k = self.alphabet.len();
        let mut delta: Vec<Vec<Option<StateId>>> = self
            .delta
            .iter()
            .map(|row| row.iter().map(|q| Some(q.unwrap_or(sink))).collect())
            .collect();
        delta.push(vec![Some(sink); k]);
        let mut finals = self.finals.clone();
        finals.push(false);
        Dfa::from_parts(
            self.alphabet.clone(),
            delta,
            Some(self.initial.unwrap_or(sink)),
            finals,
        )
    }

    /// Renumbers the accessible states in BFS order over letters in alphabet
    /// order, dropping inaccessible ones.
    pub fn canonical(&self) -> Dfa {
        let Some(start) = self.initial else {
            return Dfa::empty(self.alphabet.clone());
        };
        let mut map = vec![None; self.num_states()];
        let mut order = vec![start];
        map[start] = Some(0);
        let mut i = 0;
        while i < order.len() {
            let p = order[i];
            for q in self.delta[p].iter().flatten() {
                if map[*q].is_none() {
                    map[*q] = Some(order.len());
                    order.push(*q);
                }
            }
            i += 1;
        }
        let delta = order
            .iter()
            .map(|&p| {
                self.delta[p]
                    .iter()
                    .map(|q| q.map(|q| map[q].expect("reachable")))
                    .collect()
            })
            .collect();
        let finals = order.iter().map(|&p| self.finals[p]).collect();
        Dfa::from_parts(self.alphabet.clone(), delta, Some(0), finals)
    }

    /// Complete minimal DFA in canonical numbering (Moore refinement).
    pub fn minimize(&self) -> Dfa {
        let d = self.complete().canonical();
        let n = d.num_states();
        let k = d.alphabet.len();
        let mut class: Vec<usize> = d.finals.iter().map(|&f| usize::from(f)).collect();
        let mut count = class
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend((0..k).map(|a| class[d.delta[q][a].expect("complete")]));
                let fresh = ids.len();
                next.push(*ids.entry(sig).or_insert(fresh));
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut delta = vec![vec![None; k]; count];
        let mut finals = vec![false; count];
        for q in 0..n {
            let c = class[q];
            finals[c] = d.finals[q];
            for a in 0..k {
                delta[c][a] = Some(class[d.delta[q][a].expect("complete")]);
            }
        }
        let initial = d.initial.map(|q| class[q]);
        Dfa::from_parts(d.alphabet.clone(), delta, initial, finals).canonical()
    }

    /// Keeps the accessible and co-accessible states, in canonical order.
    /// Returns the empty DFA when the language is empty.
    pub fn trim(&self) -> Dfa {
        let nfa = self.to_nfa().trim();
        if nfa.num_states() == 0 {
            return Dfa::empty(self.alphabet.clone());
        }
        Dfa::from_nfa(&nfa)
            .expect("trimming keeps determinism")
            .canonical()
    }

    /// Swaps final and non-final states of a complete DFA.
    pub fn complement(&self) -> Result<Dfa> {
        if !self.is_complete() || self.initial.is_none() {
            return Err(Error::NotComplete);
        }
        Ok(Dfa::from_parts(
            self.alphabet.clone(),
            self.delta.clone(),
            self.initial,
            self.finals.iter().map(|f| !f).collect(),
        ))
    }

    /// Same transitions and initial state, new final set.
    pub fn with_finals(&self, finals: Vec<bool>) -> Dfa {
        assert_eq!(finals.len(), self.num_states());
        Dfa::from_parts(
            self.alphabet.clone(),
            self.delta.clone(),
            self.initial,
            finals,
        )
    }

    /// States reachable from `q` (including `q`).
    pub fn reachable_from(&self, q: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[q] = true;
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for r in self.delta[p].iter().flatten() {
                if !seen[*r] {
                    seen[*r] = true;
                    queue.push_back(*r);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_letters("ab").unwrap()
    }

    #[test]
    fn complete_adds_one_sink() {
        // {ε} over {a}: one final state, no transitions
        let a = Alphabet::from_letters("a").unwrap();
        let d = Dfa::new(a, vec![vec![None]], Some(0), vec![true]).unwrap();
        assert!(!d.is_complete());
        let c = d.complete();
        assert!(c.is_complete());
        assert_eq!(c.num_states(), 2);
        for n in 0..=4 {
            assert_eq!(c.accepts(&vec![0; n]), n == 0);
        }
        assert_eq!(c.complete(), c);
    }

    #[test]
    fn complement_requires_completeness() {
        let d = Dfa::new(ab(), vec![vec![Some(0), None]], Some(0), vec![true]).unwrap();
        assert_eq!(d.complement(), Err(Error::NotComplete));
        let c = d.complete().complement().unwrap();
        assert!(!c.accepts(&[0]) && c.accepts(&[1]));
    }

    #[test]
    fn empty_dfa_is_legal() {
        let e = Dfa::empty(ab());
        assert!(!e.accepts(&[]));
        let m = e.minimize();
        assert_eq!(m.num_states(), 1);
        assert!(!m.is_final(0));
        assert!(m.is_complete());
    }

    #[test]
    fn rejects_malformed() {
        assert!(Dfa::new(ab(), vec![vec![Some(3), None]], Some(0), vec![true]).is_err());
        assert!(Dfa::new(ab(), vec![vec![None]], Some(0), vec![true]).is_err());
        assert!(Dfa::new(ab(), vec![vec![None, None]], None, vec![true]).is_err());
    }
}
