use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::alphabet::Letter;
use crate::automata::json::{lookup, state_index, AutomatonJson};
use crate::automata::{Components, Nfa, StateId};
use crate::classification::{check_shape, Shape};
use crate::error::{Error, Result};

/// Tables are listed explicitly up to this many states.
pub const EXPLICIT_TABLE_LIMIT: usize = 16;
/// Largest automaton a table can be built for at all.
pub const MAX_SW_STATES: usize = 24;

/// `(Q, A, δ, Q₀, 𝒯)`: a run is accepting iff the set of states it visits
/// belongs to `𝒯`. Finality of the underlying automaton is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaigerWagnerAutomaton {
    automaton: Nfa,
    table: Table,
}

/// Visited sets are bit masks over the states.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Table {
    Explicit(BTreeSet<u32>),
    /// `T ∈ 𝒯` iff some `q ∈ F ∩ T` has `T ∩ future(q) = ∅`.
    Future {
        finals: u32,
        future: Vec<u32>,
    },
}

fn mask(states: impl IntoIterator<Item = StateId>) -> u32 {
    states.into_iter().fold(0, |m, q| m | 1 << q)
}

fn members(m: u32) -> impl Iterator<Item = StateId> {
    (0..32).filter(move |&q| m & (1 << q) != 0)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_SW_STATES {
        return Err(Error::TooLarge {
            what: "Staiger-Wagner automaton",
            size: n,
            limit: MAX_SW_STATES,
        });
    }
    Ok(())
}

impl StaigerWagnerAutomaton {
    /// The final states of `automaton` play no role.
    pub fn new(automaton: Nfa, table: impl IntoIterator<Item = Vec<StateId>>) -> Result<Self> {
        let n = automaton.num_states();
        check_size(n)?;
        let mut sets = BTreeSet::new();
        for t in table {
            if let Some(q) = t.iter().find(|&&q| q >= n) {
                return Err(Error::UnknownState(q.to_string()));
            }
            sets.insert(mask(t));
        }
        Ok(Self {
            automaton: strip_finals(&automaton),
            table: Table::Explicit(sets),
        })
    }

    pub fn automaton(&self) -> &Nfa {
        &self.automaton
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }

    /// Whether the visited set `t` belongs to `𝒯`.
    pub fn in_table(&self, t: &[StateId]) -> bool {
        self.contains(mask(t.iter().copied()))
    }

    fn contains(&self, t: u32) -> bool {
        match &self.table {
            Table::Explicit(sets) => sets.contains(&t),
            Table::Future { finals, future } => members(t & finals).any(|q| t & future[q] == 0),
        }
    }

    /// Members of `𝒯` as sorted state lists, ordered by bit mask.
    pub fn table(&self) -> Result<Vec<Vec<StateId>>> {
        let n = self.num_states();
        let sets: Vec<u32> = match &self.table {
            Table::Explicit(sets) => sets.iter().copied().collect(),
            Table::Future { .. } if n > EXPLICIT_TABLE_LIMIT => {
                return Err(Error::TooLarge {
                    what: "listed Staiger-Wagner table (states)",
                    size: n,
                    limit: EXPLICIT_TABLE_LIMIT,
                })
            }
            Table::Future { .. } => (0..1u32 << n).filter(|&t| self.contains(t)).collect(),
        };
        Ok(sets.into_iter().map(|t| members(t).collect()).collect())
    }

    pub fn to_json(&self) -> Result<StaigerWagnerJson> {
        let table = self
            .table()?
            .into_iter()
            .map(|t| t.into_iter().map(|q| q.to_string()).collect())
            .collect();
        Ok(StaigerWagnerJson {
            automaton: AutomatonJson::from_nfa(&self.automaton),
            table,
        })
    }
}

fn strip_finals(a: &Nfa) -> Nfa {
    Nfa::new(
        a.alphabet().clone(),
        a.num_states(),
        a.transitions().collect::<Vec<_>>(),
        a.initial().to_vec(),
        [],
    )
    .expect("same states")
}

/// The one-way automaton format plus `"table"`, a list of state lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaigerWagnerJson {
    #[serde(flatten)]
    pub automaton: AutomatonJson,
    pub table: Vec<Vec<String>>,
}

impl StaigerWagnerJson {
    pub fn to_automaton(&self) -> Result<StaigerWagnerAutomaton> {
        let a = self.automaton.to_nfa()?;
        let index = state_index(&self.automaton.states)?;
        let table = self
            .table
            .iter()
            .map(|t| {
                t.iter()
                    .map(|s| lookup(&index, s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        StaigerWagnerAutomaton::new(a, table)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Same automaton with `𝒯 = {T : ∃q ∈ F ∩ T, T ⊆ Q ∖ future(q)}`, where
/// `future(q)` are the states reachable from `q` outside its own strongly
/// connected component. In a weak automaton a run ends in a final state iff
/// its visited set is in `𝒯`.
pub fn to_staiger_wagner(a: &Nfa) -> Result<StaigerWagnerAutomaton> {
    if !check_shape(a, Shape::Weak) {
        return Err(Error::NotWeak);
    }
    let n = a.num_states();
    check_size(n)?;
    let comps = Components::compute(n, |q| a.neighbours(q).collect::<Vec<_>>());
    let reach = comps.reachability();
    let future = (0..n)
        .map(|q| {
            let own = comps.component_of(q);
            mask(
                reach[own]
                    .iter()
                    .filter(|&c| c != own)
                    .flat_map(|c| comps.members(c).iter().copied()),
            )
        })
        .collect();
    let mut sw = StaigerWagnerAutomaton {
        automaton: strip_finals(a),
        table: Table::Future {
            finals: mask(a.finals()),
            future,
        },
    };
    if n <= EXPLICIT_TABLE_LIMIT {
        let sets = (0..1u32 << n).filter(|&t| sw.contains(t)).collect();
        sw.table = Table::Explicit(sets);
    }
    Ok(sw)
}

/// Some run on `w` visits a set in `𝒯`.
pub fn sw_accepts(b: &StaigerWagnerAutomaton, w: &[Letter]) -> bool {
    let a = &b.automaton;
    let mut current: BTreeSet<(u32, StateId)> = a.initial().iter().map(|&q| (1 << q, q)).collect();
    for &x in w {
        current = current
            .iter()
            .flat_map(|&(t, q)| a.successors(q, x).iter().map(move |&r| (t | 1 << r, r)))
            .collect();
    }
    current.iter().any(|&(t, _)| b.contains(t))
}

/// Subset-tracking NFA over the reachable pairs `(P, q)`: `P` is the set
/// visited so far and `q` the current state; `(P, q)` is final iff
/// `P ∈ 𝒯`. States are numbered in BFS order.
pub fn sw_to_nfa(b: &StaigerWagnerAutomaton) -> Nfa {
    let a = &b.automaton;
    let mut index: HashMap<(u32, StateId), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    for &q in a.initial() {
        let p = (1 << q, q);
        if let Entry::Vacant(e) = index.entry(p) {
            e.insert(pairs.len());
            pairs.push(p);
            queue.push_back(p);
        }
    }
    let initial: Vec<usize> = (0..pairs.len()).collect();
    let mut transitions = Vec::new();
    while let Some((t, q)) = queue.pop_front() {
        let from = index[&(t, q)];
        for x in a.alphabet().iter() {
            for &r in a.successors(q, x) {
                let next = (t | 1 << r, r);
                let to = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    queue.push_back(next);
                    pairs.len() - 1
                });
                transitions.push((from, x, to));
            }
        }
    }
    let finals: Vec<usize> = (0..pairs.len())
        .filter(|&i| b.contains(pairs[i].0))
        .collect();
    Nfa::new(
        a.alphabet().clone(),
        pairs.len(),
        transitions,
        initial,
        finals,
    )
    .expect("indices come from the search")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{equivalent, parse_regex, to_minimal_dfa};
    use crate::random::{random_weak_dfa, seeded_rng};

    fn min_dfa(re: &str, letters: &str) -> Nfa {
        let al = Alphabet::from_letters(letters).unwrap();
        to_minimal_dfa(&parse_regex(re, &al).unwrap()).to_nfa()
    }

    #[test]
    fn table_of_a_then_anything() {
        let a = min_dfa("a(a|b)*", "ab");
        let sw = to_staiger_wagner(&a).unwrap();
        let acc = a.finals().next().unwrap();
        let table = sw.table().unwrap();
        assert_eq!(table.len(), 1 << (a.num_states() - 1));
        assert!(table.iter().all(|t| t.contains(&acc)));
        let al = a.alphabet().clone();
        assert!(sw_accepts(&sw, al.word("ab").unwrap().letters()));
        assert!(!sw_accepts(&sw, al.word("ba").unwrap().letters()));
        assert!(equivalent(&sw_to_nfa(&sw), &a).unwrap());
    }

    #[test]
    fn empty_tables() {
        let a = min_dfa("%0", "ab");
        let sw = to_staiger_wagner(&a).unwrap();
        assert!(sw.table().unwrap().is_empty());
        assert!(!sw_accepts(&sw, &[]));
        assert!(crate::automata::is_empty_language(&sw_to_nfa(&sw)));
    }

    #[test]
    fn full_table_on_complete_automaton_is_everything() {
        let a = min_dfa("ab(a|b)*", "ab");
        let all = (0..1u32 << a.num_states()).map(|t| members(t).collect());
        let sw = StaigerWagnerAutomaton::new(a.clone(), all).unwrap();
        assert!(equivalent(&sw_to_nfa(&sw), &min_dfa("(a|b)*", "ab")).unwrap());
    }

    #[test]
    fn language_is_preserved_on_random_weak_dfas() {
        let mut rng = seeded_rng(11);
        for _ in 0..100 {
            let d = random_weak_dfa(&mut rng, 6, 3).to_nfa();
            let sw = to_staiger_wagner(&d).unwrap();
            let back = sw_to_nfa(&sw);
            assert!(back.num_states() <= (1 << d.num_states()) * d.num_states());
            assert!(equivalent(&back, &d).unwrap());
            for w in d.alphabet().words_up_to(5) {
                assert_eq!(sw_accepts(&sw, w.letters()), d.accepts(w.letters()));
            }
        }
    }

    #[test]
    fn non_weak_input_is_refused() {
        // (ab)*: the final state and the other one share a cycle
        let a = min_dfa("(ab)*", "ab");
        assert_eq!(to_staiger_wagner(&a), Err(Error::NotWeak));
    }

    #[test]
    fn json_round_trip() {
        let sw = to_staiger_wagner(&min_dfa("ab(a|b)*", "ab")).unwrap();
        let text = serde_json::to_string(&sw.to_json().unwrap()).unwrap();
        assert!(text.contains("\"table\""));
        let back = StaigerWagnerJson::parse(&text)
            .unwrap()
            .to_automaton()
            .unwrap();
        assert_eq!(back.table().unwrap(), sw.table().unwrap());
        assert!(equivalent(&sw_to_nfa(&back), &sw_to_nfa(&sw)).unwrap());
    }

    #[test]
    fn large_automata_use_the_formula() {
        let al = Alphabet::from_letters("a").unwrap();
        let n = 20;
        let chain = Nfa::new(
            al.clone(),
            n,
            (0..n - 1).map(|q| (q, 0, q + 1)),
            [0],
            [n - 1],
        )
        .unwrap();
        let sw = to_staiger_wagner(&chain).unwrap();
        assert!(sw.table().is_err());
        assert!(sw_accepts(&sw, &vec![0; n - 1]));
        assert!(!sw_accepts(&sw, &vec![0; n - 2]));
        let big = Nfa::new(al, 30, [], [0], []).unwrap();
        assert!(matches!(
            to_staiger_wagner(&big),
            Err(Error::TooLarge { .. })
        ));
    }
}
