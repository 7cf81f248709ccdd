use std::collections::{BTreeMap, VecDeque};

use crate::alphabet::{Alphabet, Letter};
use crate::automata::dfa::Dfa;
use crate::error::{Error, Result};

pub type StateId = usize;

/// Nondeterministic finite automaton `(Q, A, δ, Q₀, F)` with states `0..n`.
///
/// The automaton with zero states is legal and recognizes the empty language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    /// `delta[q][a]` is the sorted, duplicate-free successor list.
    delta: Vec<Vec<Vec<StateId>>>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new<T, I, F>(
        alphabet: Alphabet,
        num_states: usize,
        transitions: T,
        initial: I,
        finals: F,
    ) -> Result<Self>
    where
        T: IntoIterator<Item = (StateId, Letter, StateId)>,
        I: IntoIterator<Item = StateId>,
        F: IntoIterator<Item = StateId>,
    {
        let check = |q: StateId| {
            if q < num_states {
                Ok(q)
            } else {
                Err(Error::UnknownState(q.to_string()))
            }
        };
        let k = alphabet.len();
        let mut delta = vec![vec![Vec::new(); k]; num_states];
        for (p, a, q) in transitions {
            check(p)?;
            check(q)?;
            if a >= k {
                return Err(Error::Malformed(format!("letter index {a} out of range")));
            }
            delta[p][a].push(q);
        }
        for row in &mut delta {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        let mut init = initial.into_iter().map(check).collect::<Result<Vec<_>>>()?;
        init.sort_unstable();
        init.dedup();
        let mut fin = vec![false; num_states];
        for q in finals {
            fin[check(q)?] = true;
        }
        Ok(Self {
            alphabet,
            delta,
            initial: init,
            finals: fin,
        })
    }

    /// The automaton without states.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            delta: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn successors(&self, q: StateId, a: Letter) -> &[StateId] {
        &self.delta[q][a]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q])
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a, q)))
        })
    }

    /// Successors of `q` on any letter.
    pub fn neighbours(&self, q: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.delta[q].iter().flatten().copied()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().flatten().all(|s| s.len() <= 1)
    }

    /// One step of the subset simulation.
    pub fn step_set(&self, set: &[bool], a: Letter) -> Vec<bool> {
        let mut next = vec![false; self.num_states()];
        for (p, _) in set.iter().enumerate().filter(|(_, &b)| b) {
            for &q in &self.delta[p][a] {
                next[q] = true;
            }
        }
        next
    }

    pub fn initial_set(&self) -> Vec<bool> {
        let mut s = vec![false; self.num_states()];
        for &q in &self.initial {
            s[q] = true;
        }
        s
    }

    /// Membership by on-the-fly subset tracking.
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut cur = self.initial_set();
        for &a in word {
            cur = self.step_set(&cur, a);
            if !cur.contains(&true) {
                return false;
            }
        }
        cur.iter().zip(&self.finals).any(|(&c, &f)| c && f)
    }

    /// States reachable from some initial state.
    pub fn accessible_states(&self) -> Vec<bool> {
        let mut seen = self.initial_set();
        let mut queue: VecDeque<StateId> = self.initial.iter().copied().collect();
        while let Some(p) = queue.pop_front() {
            for q in self.neighbours(p) {
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coaccessible_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            preds[q].push(p);
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<StateId> = self.finals().collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Keeps the states flagged in `keep`, renumbered in increasing order.
    pub fn restrict(&self, keep: &[bool]) -> Nfa {
        let mut map = vec![None; self.num_states()];
        let mut next = 0;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = Some(next);
                next += 1;
            }
        }
        let transitions: Vec<_> = self
            .transitions()
            .filter_map(|(p, a, q)| Some((map[p]?, a, map[q]?)))
            .collect();
        let initial: Vec<_> = self.initial.iter().filter_map(|&q| map[q]).collect();
        let finals: Vec<_> = self.finals().filter_map(|q| map[q]).collect();
        Nfa::new(self.alphabet.clone(), next, transitions, initial, finals)
            .expect("restriction preserves well-formedness")
    }

    pub fn accessible(&self) -> Nfa {
        self.restrict(&self.accessible_states())
    }

    /// Keeps exactly the states that are both accessible and co-accessible.
    pub fn trim(&self) -> Nfa {
        let acc = self.accessible_states();
        let co = self.coaccessible_states();
        let keep: Vec<bool> = acc.iter().zip(&co).map(|(&a, &c)| a && c).collect();
        self.restrict(&keep)
    }

    pub fn is_trim(&self) -> bool {
        let acc = self.accessible_states();
        let co = self.coaccessible_states();
        acc.iter().zip(&co).all(|(&a, &c)| a && c)
    }

    /// Reverses every edge and swaps initial and final states.
    pub fn reverse(&self) -> Nfa {
        let transitions: Vec<_> = self.transitions().map(|(p, a, q)| (q, a, p)).collect();
        Nfa::new(
            self.alphabet.clone(),
            self.num_states(),
            transitions,
            self.finals().collect::<Vec<_>>(),
            self.initial.clone(),
        )
        .expect("reversal preserves well-formedness")
    }

    /// Subset construction; the result is complete and its states are
    /// numbered in BFS order over letters.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let start: Vec<StateId> = self.initial.clone();
        let mut index: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<Option<StateId>>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next: Vec<StateId> = subsets[i]
                    .iter()
                    .flat_map(|&p| self.delta[p][a].iter().copied())
                    .collect();
                next.sort_unstable();
                next.dedup();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                row.push(Some(id));
            }
            delta.push(row);
            i += 1;
        }
        let finals: Vec<bool> = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.finals[q]))
            .collect();
        Dfa::from_parts(self.alphabet.clone(), delta, Some(0), finals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_letters("ab").unwrap()
    }

    #[test]
    fn rejects_out_of_range_states() {
        let err = Nfa::new(ab(), 1, [(0, 0, 1)], [0], [0]).unwrap_err();
        assert_eq!(err, Error::UnknownState("1".into()));
    }

    #[test]
    fn trim_drops_dead_and_unreachable() {
        // 0 -a-> 1 (final), 0 -b-> 2 (dead), 3 unreachable
        let n = Nfa::new(ab(), 4, [(0, 0, 1), (0, 1, 2), (3, 0, 1)], [0], [1]).unwrap();
        let t = n.trim();
        assert_eq!(t.num_states(), 2);
        assert!(t.is_trim());
        assert!(t.accepts(&[0]) && !t.accepts(&[1]));
    }

    #[test]
    fn empty_automaton() {
        let e = Nfa::empty(ab());
        assert!(!e.accepts(&[]));
        assert_eq!(e.trim().num_states(), 0);
        assert_eq!(e.determinize().num_states(), 1);
    }
}
