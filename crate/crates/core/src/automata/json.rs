//! JSON interchange for one-way automata.
//!
//! ```json
//! {"alphabet": ["a","b"], "states": ["0","1"], "initial": ["0"],
//!  "final": ["1"], "transitions": [["0","a","1"]]}
//! ```
//!
//! Determinism and completeness are inferred, never declared.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::automata::{Dfa, Nfa};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub transitions: Vec<[String; 3]>,
}

/// Serializes through `serde_json::Value`, whose maps are sorted, so equal
/// values always print byte-identically.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

pub(crate) fn parse_alphabet(letters: &[String]) -> Result<Alphabet> {
    let chars = letters
        .iter()
        .map(|s| single_char(s))
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(chars)
}

pub(crate) fn single_char(s: &str) -> Result<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Malformed(format!("'{s}' is not a single character"))),
    }
}

pub(crate) fn alphabet_strings(a: &Alphabet) -> Vec<String> {
    a.letters().iter().map(|c| c.to_string()).collect()
}

pub(crate) fn state_index(states: &[String]) -> Result<HashMap<&str, usize>> {
    let mut map = HashMap::new();
    for (i, s) in states.iter().enumerate() {
        if map.insert(s.as_str(), i).is_some() {
            return Err(Error::Malformed(format!("duplicate state name '{s}'")));
        }
    }
    Ok(map)
}

pub(crate) fn lookup(map: &HashMap<&str, usize>, name: &str) -> Result<usize> {
    map.get(name)
        .copied()
        .ok_or_else(|| Error::UnknownState(name.to_string()))
}

impl AutomatonJson {
    pub fn from_nfa(a: &Nfa) -> Self {
        let name = |q: usize| q.to_string();
        let al = a.alphabet();
        Self {
            alphabet: alphabet_strings(al),
            states: (0..a.num_states()).map(name).collect(),
            initial: a.initial().iter().map(|&q| name(q)).collect(),
            finals: a.finals().map(name).collect(),
            transitions: a
                .transitions()
                .map(|(p, l, q)| [name(p), al.char_of(l).to_string(), name(q)])
                .collect(),
        }
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        Self::from_nfa(&d.to_nfa())
    }

    pub fn to_nfa(&self) -> Result<Nfa> {
        let alphabet = parse_alphabet(&self.alphabet)?;
        let index = state_index(&self.states)?;
        let transitions = self
            .transitions
            .iter()
            .map(|[p, a, q]| {
                Ok((
                    lookup(&index, p)?,
                    alphabet.index_of(single_char(a)?)?,
                    lookup(&index, q)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = self
            .initial
            .iter()
            .map(|s| lookup(&index, s))
            .collect::<Result<Vec<_>>>()?;
        let finals = self
            .finals
            .iter()
            .map(|s| lookup(&index, s))
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(alphabet, self.states.len(), transitions, initial, finals)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_regex;

    #[test]
    fn round_trip_preserves_automaton() {
        let ab = Alphabet::from_letters("ab").unwrap();
        let n = parse_regex("ab(a|b)*", &ab).unwrap();
        let j = AutomatonJson::from_nfa(&n);
        let text = canonical_json(&j);
        assert_eq!(AutomatonJson::parse(&text).unwrap().to_nfa().unwrap(), n);
        // keys come out sorted
        let keys: Vec<usize> = ["alphabet", "final", "initial", "states", "transitions"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn reports_bad_input() {
        let bad = r#"{"alphabet":["ab"],"states":[],"initial":[],"final":[],"transitions":[]}"#;
        assert!(matches!(
            AutomatonJson::parse(bad).unwrap().to_nfa(),
            Err(Error::Malformed(_))
        ));
        let unknown =
            r#"{"alphabet":["a"],"states":["p"],"initial":["q"],"final":[],"transitions":[]}"#;
        assert_eq!(
            AutomatonJson::parse(unknown).unwrap().to_nfa(),
            Err(Error::UnknownState("q".into()))
        );
        assert!(AutomatonJson::parse("{").is_err());
    }
}
