//! Deterministic two-way automata with end markers.
//!
//! The tape on input `u` is `▷u◁`, positions `0..=|u|+1`; the run starts in
//! the initial state on position 1. The head moves before each transition,
//! right if the destination state is right-moving and left otherwise. A run
//! ends when the head reaches position `|u|+2` and accepts if it ends in a
//! final state.
//!
//! Transitions must respect the signature
//! `(Z × A × Z) ∪ (Y × {▷} × X) ∪ (X × {◁} × Z)` where `X` are the
//! right-moving and `Y` the left-moving states. The type accepts any
//! transition set; [`TwoWayAutomaton::validate`] reports violations and
//! every operation that needs a valid automaton checks first.

mod convert;
pub mod fixtures;
mod json;
mod monomial;
mod ranker;
mod run;

use std::fmt;

use serde::Serialize;

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{Components, StateId};
use crate::error::{Error, Result};

pub use convert::{
    complement_one_pass, convert_flip_fully, from_one_way, to_one_way_dfa, Conversion,
};
pub use json::TwoWayJson;
pub use monomial::{
    extract_monomials, monomial_check, monomial_nfa, Monomial, MonomialCheck, MonomialJson,
    DEFAULT_EXTRACTION_CAP,
};
pub use ranker::{compile_ranker, eval_ranker, Modality, Ranker};
pub use run::{simulate, Configuration, Outcome, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Right,
    Left,
}

/// A tape symbol: a letter or one of the end markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(Letter),
    /// `▷`
    Begin,
    /// `◁`
    End,
}

impl Symbol {
    fn index(self, k: usize) -> usize {
        match self {
            Symbol::Letter(a) => a,
            Symbol::Begin => k,
            Symbol::End => k + 1,
        }
    }

    fn from_index(i: usize, k: usize) -> Symbol {
        match i {
            i if i < k => Symbol::Letter(i),
            i if i == k => Symbol::Begin,
            _ => Symbol::End,
        }
    }

    pub fn render(self, alphabet: &Alphabet) -> char {
        match self {
            Symbol::Letter(a) => alphabet.char_of(a),
            Symbol::Begin => crate::alphabet::LEFT_MARKER,
            Symbol::End => crate::alphabet::RIGHT_MARKER,
        }
    }
}

/// One validation finding, with the offending transition when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub message: String,
    pub transition: Option<[String; 3]>,
}

impl Diagnostic {
    fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            transition: None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if let Some([p, a, q]) = &self.transition {
            write!(f, " ({p} -{a}-> {q})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWayAutomaton {
    alphabet: Alphabet,
    names: Vec<String>,
    directions: Vec<Direction>,
    /// `delta[q][symbol index]`, sorted and deduplicated
    delta: Vec<Vec<Vec<StateId>>>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
}

/// Structural properties checked by [`TwoWayAutomaton::has_shape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoWayShape {
    /// Every strongly connected component of the state graph is a single
    /// state.
    PartiallyOrdered,
    /// Every `◁`-transition is a self-loop.
    OnePass,
    /// Final states only lead to final states.
    Flip,
    FullyAccepting,
    /// Finality is constant on strongly connected components.
    Weak,
}

impl TwoWayShape {
    pub const ALL: [TwoWayShape; 5] = [
        TwoWayShape::PartiallyOrdered,
        TwoWayShape::OnePass,
        TwoWayShape::Flip,
        TwoWayShape::FullyAccepting,
        TwoWayShape::Weak,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TwoWayShape::PartiallyOrdered => "partially_ordered",
            TwoWayShape::OnePass => "one_pass",
            TwoWayShape::Flip => "flip",
            TwoWayShape::FullyAccepting => "fully_accepting",
            TwoWayShape::Weak => "weak",
        }
    }

    pub fn parse(name: &str) -> Option<TwoWayShape> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name || s.name().replace('_', "-") == name)
    }
}

impl TwoWayAutomaton {
    /// Builds an automaton from raw parts. Only state indices are checked
    /// here; see [`validate`](Self::validate) for the rest.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<(String, Direction)>,
        transitions: impl IntoIterator<Item = (StateId, Symbol, StateId)>,
        initial: impl IntoIterator<Item = StateId>,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let n = states.len();
        let check = |q: StateId| {
            if q < n {
                Ok(q)
            } else {
                Err(Error::UnknownState(q.to_string()))
            }
        };
        let k = alphabet.len();
        let mut delta = vec![vec![Vec::new(); k + 2]; n];
        for (p, s, q) in transitions {
            check(p)?;
            check(q)?;
            if let Symbol::Letter(a) = s {
                if a >= k {
                    return Err(Error::Malformed(format!("letter index {a} out of range")));
                }
            }
            delta[p][s.index(k)].push(q);
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
        let mut fin = vec![false; n];
        for q in finals {
            fin[check(q)?] = true;
        }
        let (names, directions) = states.into_iter().unzip();
        Ok(Self {
            alphabet,
            names,
            directions,
            delta,
            initial: init,
            finals: fin,
        })
    }

    /// The automaton without states, which recognizes nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            names: Vec::new(),
            directions: Vec::new(),
            delta: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn direction(&self, q: StateId) -> Direction {
        self.directions[q]
    }

    pub fn is_right(&self, q: StateId) -> bool {
        self.directions[q] == Direction::Right
    }

    pub fn right_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.is_right(q))
    }

    pub fn left_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| !self.is_right(q))
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    /// The initial state of a deterministic automaton.
    pub fn initial(&self) -> Option<StateId> {
        self.initial.first().copied()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn successors(&self, q: StateId, s: Symbol) -> &[StateId] {
        &self.delta[q][s.index(self.alphabet.len())]
    }

    /// The successor of a deterministic automaton.
    pub fn step(&self, q: StateId, s: Symbol) -> Option<StateId> {
        self.successors(q, s).first().copied()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        let k = self.alphabet.len();
        self.delta.iter().enumerate().flat_map(move |(p, row)| {
            row.iter().enumerate().flat_map(move |(i, succ)| {
                succ.iter().map(move |&q| (p, Symbol::from_index(i, k), q))
            })
        })
    }

    /// Symbols a state must be able to read in a complete automaton:
    /// letters and `◁` for right-moving states, letters and `▷` for
    /// left-moving ones.
    pub fn required_symbols(&self, q: StateId) -> impl Iterator<Item = Symbol> {
        let k = self.alphabet.len();
        let marker = if self.is_right(q) {
            Symbol::End
        } else {
            Symbol::Begin
        };
        (0..k).map(Symbol::Letter).chain(std::iter::once(marker))
    }

    pub fn is_deterministic(&self) -> bool {
        (self.initial.len() == 1 || self.num_states() == 0)
            && self
                .delta
                .iter()
                .all(|row| row.iter().all(|s| s.len() <= 1))
    }

    pub fn is_complete(&self) -> bool {
        (0..self.num_states()).all(|q| {
            self.required_symbols(q)
                .all(|s| !self.successors(q, s).is_empty())
        })
    }

    fn render_transition(&self, p: StateId, s: Symbol, q: StateId) -> [String; 3] {
        [
            self.names[p].clone(),
            s.render(&self.alphabet).to_string(),
            self.names[q].clone(),
        ]
    }

    /// Signature, initial state and determinism checks. An empty result
    /// means the automaton is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let n = self.num_states();
        if n > 0 {
            match self.initial.as_slice() {
                [] => out.push(Diagnostic::new("no initial state")),
                [q] if !self.is_right(*q) => out.push(Diagnostic::new(format!(
                    "initial state '{}' is not right-moving",
                    self.names[*q]
                ))),
                [_] => {}
                _ => out.push(Diagnostic::new("more than one initial state")),
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (p, s, q) in self.transitions() {
            let bad = match s {
                Symbol::Letter(_) => None,
                Symbol::Begin if self.is_right(p) => Some("only left-moving states read ▷"),
                Symbol::Begin if !self.is_right(q) => Some("▷-successors must be right-moving"),
                Symbol::End if !self.is_right(p) => Some("only right-moving states read ◁"),
                _ => None,
            };
            if let Some(msg) = bad {
                out.push(Diagnostic {
                    message: msg.to_string(),
                    transition: Some(self.render_transition(p, s, q)),
                });
            }
            if self.successors(p, s).len() > 1 && seen.insert((p, s)) {
                out.push(Diagnostic {
                    message: format!(
                        "state '{}' has {} successors on '{}'",
                        self.names[p],
                        self.successors(p, s).len(),
                        s.render(&self.alphabet)
                    ),
                    transition: Some(self.render_transition(p, s, q)),
                });
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidTwoWay(diags))
        }
    }

    fn components(&self) -> Components {
        Components::compute(self.num_states(), |q| {
            self.delta[q].iter().flatten().copied().collect::<Vec<_>>()
        })
    }

    pub fn has_shape(&self, shape: TwoWayShape) -> bool {
        let n = self.num_states();
        match shape {
            TwoWayShape::PartiallyOrdered => {
                self.components().components().iter().all(|c| c.len() == 1)
            }
            TwoWayShape::OnePass => self
                .transitions()
                .all(|(p, s, q)| s != Symbol::End || p == q),
            TwoWayShape::Flip => self
                .transitions()
                .all(|(p, _, q)| !self.finals[p] || self.finals[q]),
            TwoWayShape::FullyAccepting => (0..n).all(|q| self.finals[q]),
            TwoWayShape::Weak => self
                .components()
                .components()
                .iter()
                .all(|c| c.iter().all(|&q| self.finals[q] == self.finals[c[0]])),
        }
    }

    /// Errors unless the automaton is valid and has every listed shape.
    pub(crate) fn require(&self, shapes: &[TwoWayShape], complete: bool) -> Result<()> {
        self.ensure_valid()?;
        for &s in shapes {
            if !self.has_shape(s) {
                return Err(Error::Precondition(format!(
                    "automaton is not {}",
                    s.name()
                )));
            }
        }
        if complete && !self.is_complete() {
            return Err(Error::NotComplete);
        }
        Ok(())
    }

    /// Adds a right-moving sink, looping on every letter and on `◁`, as the
    /// target of every missing required transition. A right-moving sink
    /// always runs off the tape, so no new loops appear.
    ///
    /// A missing `◁`-transition of a one-pass automaton becomes a self-loop
    /// instead, keeping it one-pass; the state is made non-final, which
    /// preserves the language because in a one-pass automaton a state's
    /// finality only matters when it reads `◁`. Returns the sink's id, or
    /// `None` if the automaton was complete.
    pub(crate) fn complete_with_sink(
        &self,
        name: &str,
        final_sink: bool,
    ) -> (Self, Option<StateId>) {
        if self.is_complete() && self.num_states() > 0 {
            return (self.clone(), None);
        }
        let one_pass = self.has_shape(TwoWayShape::OnePass);
        let mut t = self.clone();
        let sink = t.add_state(fresh_name(&t.names, name), Direction::Right, final_sink);
        for q in 0..t.num_states() {
            let missing: Vec<Symbol> = t
                .required_symbols(q)
                .filter(|&s| t.successors(q, s).is_empty())
                .collect();
            for s in missing {
                let target = if q == sink || (s == Symbol::End && one_pass) {
                    q
                } else {
                    sink
                };
                if q != sink && target == q {
                    t.finals[q] = false;
                }
                t.delta[q][s.index(t.alphabet.len())].push(target);
            }
        }
        if t.initial.is_empty() {
            t.initial.push(sink);
        }
        (t, Some(sink))
    }

    pub(crate) fn add_state(&mut self, name: String, dir: Direction, is_final: bool) -> StateId {
        self.names.push(name);
        self.directions.push(dir);
        self.delta.push(vec![Vec::new(); self.alphabet.len() + 2]);
        self.finals.push(is_final);
        self.names.len() - 1
    }
}

fn fresh_name(names: &[String], base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 1;
    while names.contains(&name) {
        name = format!("{base}{i}");
        i += 1;
    }
    name
}

/// Incremental construction with named states.
#[derive(Debug, Clone)]
pub struct Builder {
    alphabet: Alphabet,
    states: Vec<(String, Direction)>,
    finals: Vec<StateId>,
    transitions: Vec<(StateId, Symbol, StateId)>,
    initial: Vec<StateId>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            states: Vec::new(),
            finals: Vec::new(),
            transitions: Vec::new(),
            initial: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str, dir: Direction, is_final: bool) -> StateId {
        self.states.push((name.to_string(), dir));
        let q = self.states.len() - 1;
        if is_final {
            self.finals.push(q);
        }
        q
    }

    pub fn initial(&mut self, q: StateId) -> &mut Self {
        self.initial.push(q);
        self
    }

    pub fn edge(&mut self, p: StateId, s: Symbol, q: StateId) -> &mut Self {
        self.transitions.push((p, s, q));
        self
    }

    /// One transition per letter of `letters`, given as characters.
    pub fn edges(&mut self, p: StateId, letters: &str, q: StateId) -> &mut Self {
        for c in letters.chars() {
            let s = match c {
                crate::alphabet::LEFT_MARKER => Symbol::Begin,
                crate::alphabet::RIGHT_MARKER => Symbol::End,
                c => Symbol::Letter(self.alphabet.index_of(c).expect("letter of the alphabet")),
            };
            self.transitions.push((p, s, q));
        }
        self
    }

    pub fn build(&self) -> Result<TwoWayAutomaton> {
        TwoWayAutomaton::new(
            self.alphabet.clone(),
            self.states.clone(),
            self.transitions.iter().copied(),
            self.initial.iter().copied(),
            self.finals.iter().copied(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::from_letters("abc").unwrap()
    }

    #[test]
    fn empty_automaton_is_valid() {
        let t = TwoWayAutomaton::empty(abc());
        assert!(t.validate().is_empty());
        assert!(t.is_deterministic());
    }

    #[test]
    fn begin_marker_must_lead_right() {
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, false);
        let y = b.state("y", Direction::Left, false);
        let y2 = b.state("y2", Direction::Left, false);
        b.initial(x).edges(x, "a", y).edge(y, Symbol::Begin, y2);
        let diags = b.build().unwrap().validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(
            diags[0].transition,
            Some(["y".to_string(), ">".to_string(), "y2".to_string()])
        );
    }

    #[test]
    fn reports_nondeterminism() {
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, false);
        let z = b.state("z", Direction::Right, false);
        b.initial(x).edges(x, "a", x).edges(x, "a", z);
        let t = b.build().unwrap();
        assert!(!t.is_deterministic());
        assert_eq!(t.validate().len(), 1);
        assert!(t.ensure_valid().is_err());
    }

    #[test]
    fn end_marker_only_for_right_states() {
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, false);
        let y = b.state("y", Direction::Left, false);
        b.initial(y).edges(y, "<", x);
        let t = b.build().unwrap();
        let msgs: Vec<String> = t.validate().iter().map(|d| d.message.clone()).collect();
        assert!(msgs.iter().any(|m| m.contains("not right-moving")));
        assert!(msgs.iter().any(|m| m.contains("◁")));
        let _ = x;
    }

    #[test]
    fn two_cycle_is_not_partially_ordered() {
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, false);
        let z = b.state("z", Direction::Right, false);
        b.initial(x).edges(x, "a", z).edges(z, "a", x);
        let t = b.build().unwrap();
        assert!(!t.has_shape(TwoWayShape::PartiallyOrdered));
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, false);
        let z = b.state("z", Direction::Right, true);
        b.initial(x).edges(x, "abc", x).edges(x, "<", z);
        let t = b.build().unwrap();
        assert!(t.has_shape(TwoWayShape::PartiallyOrdered));
        assert!(!t.has_shape(TwoWayShape::OnePass));
    }

    #[test]
    fn completion_adds_a_right_moving_sink() {
        let mut b = Builder::new(abc());
        let x = b.state("x", Direction::Right, true);
        let y = b.state("y", Direction::Left, false);
        b.initial(x).edges(x, "a", y);
        let t = b.build().unwrap();
        let (c, sink) = t.complete_with_sink("sink", false);
        let sink = sink.unwrap();
        assert!(c.is_complete());
        assert!(c.is_right(sink) && !c.is_final(sink));
        assert_eq!(c.step(y, Symbol::Begin), Some(sink));
        // a missing ◁ becomes a non-final self-loop, which keeps one-pass
        // intact and the language unchanged
        assert_eq!(c.step(x, Symbol::End), Some(x));
        assert!(!c.is_final(x));
        assert!(c.validate().is_empty());
    }

    #[test]
    fn shape_names_round_trip() {
        for s in TwoWayShape::ALL {
            assert_eq!(TwoWayShape::parse(s.name()), Some(s));
        }
    }
}
