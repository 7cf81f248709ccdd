//! JSON interchange for two-way automata: the one-way format plus the
//! partition of the states by direction. `">"` and `"<"` denote the end
//! markers in transitions.
//!
//! ```json
//! {"alphabet": ["a"], "states": ["x"], "right_states": ["x"],
//!  "left_states": [], "initial": ["x"], "final": ["x"],
//!  "transitions": [["x","a","x"], ["x","<","x"]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::alphabet::{LEFT_MARKER, RIGHT_MARKER};
use crate::automata::json::{alphabet_strings, lookup, parse_alphabet, single_char, state_index};
use crate::error::{Error, Result};
use crate::two_way::{Diagnostic, Direction, Symbol, TwoWayAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoWayJson {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub right_states: Vec<String>,
    pub left_states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub transitions: Vec<[String; 3]>,
}

impl TwoWayJson {
    pub fn from_automaton(t: &TwoWayAutomaton) -> Self {
        let name = |q: usize| t.name(q).to_string();
        let al = t.alphabet();
        Self {
            alphabet: alphabet_strings(al),
            states: (0..t.num_states()).map(name).collect(),
            right_states: t.right_states().map(name).collect(),
            left_states: t.left_states().map(name).collect(),
            initial: t.initial_states().iter().map(|&q| name(q)).collect(),
            finals: (0..t.num_states())
                .filter(|&q| t.is_final(q))
                .map(name)
                .collect(),
            transitions: t
                .transitions()
                .map(|(p, s, q)| [name(p), s.render(al).to_string(), name(q)])
                .collect(),
        }
    }

    /// Structural problems with the direction partition come back as
    /// [`Error::InvalidTwoWay`]; the signature is not checked here.
    pub fn to_automaton(&self) -> Result<TwoWayAutomaton> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let index = state_index(&self.states)?;
        let mut dirs: Vec<Option<Direction>> = vec![None; self.states.len()];
        let mut diags = Vec::new();
        for (list, dir) in [
            (&self.right_states, Direction::Right),
            (&self.left_states, Direction::Left),
        ] {
            for s in list {
                let q = lookup(&index, s)?;
                if dirs[q].replace(dir).is_some_and(|d| d != dir) {
                    diags.push(Diagnostic::new(format!(
                        "state '{s}' is both right- and left-moving"
                    )));
                }
            }
        }
        for (q, d) in dirs.iter().enumerate() {
            if d.is_none() {
                diags.push(Diagnostic::new(format!(
                    "state '{}' is neither right- nor left-moving",
                    self.states[q]
                )));
            }
        }
        if !diags.is_empty() {
            return Err(Error::InvalidTwoWay(diags));
        }
        let transitions = self
            .transitions
            .iter()
            .map(|[p, a, q]| {
                let s = match single_char(a)? {
                    LEFT_MARKER => Symbol::Begin,
                    RIGHT_MARKER => Symbol::End,
                    c => Symbol::Letter(alphabet.index_of(c)?),
                };
                Ok((lookup(&index, p)?, s, lookup(&index, q)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = |names: &[String]| {
            names
                .iter()
                .map(|s| lookup(&index, s))
                .collect::<Result<Vec<_>>>()
        };
        let states = self
            .states
            .iter()
            .cloned()
            .zip(dirs.into_iter().map(|d| d.expect("checked above")))
            .collect();
        TwoWayAutomaton::new(
            alphabet,
            states,
            transitions,
            ids(&self.initial)?,
            ids(&self.finals)?,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}
