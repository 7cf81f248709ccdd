use std::collections::HashMap;

use serde::Serialize;

use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::two_way::{Direction, Symbol, TwoWayAutomaton, TwoWayShape};

/// How a deterministic automaton leaves a position it entered: rightward
/// in some right-moving state, or never.
type Exit = Option<StateId>;

/// What a prefix `w` looks like from its right boundary: the state in which
/// the head first crosses into position `|w|+1`, and for every left-moving
/// state entering position `|w|` from the right, where it exits again.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Behaviour {
    cross: Exit,
    table: Vec<Exit>,
}

/// Language-equivalent one-way DFA, built from prefix behaviour tables.
/// A prefix on which the run dies or loops before crossing its right
/// boundary is absorbing.
pub fn to_one_way_dfa(t: &TwoWayAutomaton) -> Result<Dfa> {
    t.ensure_valid()?;
    let al = t.alphabet().clone();
    let Some(x0) = t.initial() else {
        return Ok(Dfa::empty(al));
    };
    let left: Vec<StateId> = t.left_states().collect();
    let slot: HashMap<StateId, usize> = left.iter().enumerate().map(|(i, &y)| (y, i)).collect();

    // exit from a position holding `symbol`, entered in state `z`, given the
    // behaviour of everything to its left
    let exit = |z: StateId, symbol: Symbol, prev: &[Exit]| -> Exit {
        let mut seen = vec![false; t.num_states()];
        let mut z = z;
        loop {
            if std::mem::replace(&mut seen[z], true) {
                return None;
            }
            let next = t.step(z, symbol)?;
            if t.is_right(next) {
                return Some(next);
            }
            z = prev[slot[&next]]?;
        }
    };

    let start = Behaviour {
        cross: Some(x0),
        table: left.iter().map(|&y| exit(y, Symbol::Begin, &[])).collect(),
    };
    let dead = Behaviour {
        cross: None,
        table: Vec::new(),
    };
    let mut index = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let b = states[i].clone();
        let mut row = Vec::with_capacity(al.len());
        for a in al.iter() {
            let next = match b.cross {
                None => dead.clone(),
                Some(x) => match exit(x, Symbol::Letter(a), &b.table) {
                    None => dead.clone(),
                    cross => Behaviour {
                        cross,
                        table: left
                            .iter()
                            .map(|&y| exit(y, Symbol::Letter(a), &b.table))
                            .collect(),
                    },
                },
            };
            let id = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                states.len() - 1
            });
            row.push(Some(id));
        }
        delta.push(row);
        i += 1;
    }
    let finals = states
        .iter()
        .map(|b| {
            b.cross
                .and_then(|x| exit(x, Symbol::End, &b.table))
                .is_some_and(|z| t.is_final(z))
        })
        .collect();
    Dfa::new(al, delta, Some(0), finals)
}

/// The one-way automaton as a two-way automaton without left-moving
/// states; `◁` is read by a self-loop, so the result is one-pass.
pub fn from_one_way(d: &Dfa) -> TwoWayAutomaton {
    let states = (0..d.num_states())
        .map(|q| (format!("q{q}"), Direction::Right))
        .collect();
    let transitions = d
        .transitions()
        .map(|(p, a, q)| (p, Symbol::Letter(a), q))
        .chain((0..d.num_states()).map(|q| (q, Symbol::End, q)));
    let finals = (0..d.num_states()).filter(|&q| d.is_final(q));
    TwoWayAutomaton::new(
        d.alphabet().clone(),
        states,
        transitions,
        d.initial(),
        finals,
    )
    .expect("indices come from a valid DFA")
}

/// Complement of a deterministic one-pass po2dfa: complete it with a
/// non-final right-moving sink, then swap finality on the right-moving
/// states. Left-moving states end as non-final; a one-pass run always ends
/// in the right-moving state that reads `◁`.
pub fn complement_one_pass(t: &TwoWayAutomaton) -> Result<TwoWayAutomaton> {
    t.require(
        &[TwoWayShape::OnePass, TwoWayShape::PartiallyOrdered],
        false,
    )?;
    let (mut c, _) = t.complete_with_sink("sink", false);
    for q in 0..c.num_states() {
        c.finals[q] = c.is_right(q) && !c.finals[q];
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conversion {
    FlipToFully,
    FullyToFlip,
}

impl Conversion {
    pub fn parse(name: &str) -> Option<Conversion> {
        match name {
            "flip_to_fully" | "flip-to-fully" => Some(Conversion::FlipToFully),
            "fully_to_flip" | "fully-to-flip" => Some(Conversion::FullyToFlip),
            _ => None,
        }
    }
}

/// Both directions produce an automaton for the complement.
///
/// `FlipToFully` takes a complete flip one-pass po2dfa and keeps only its
/// non-final states, all made final; a run that would enter a final state
/// gets stuck instead. If the initial state is final the input recognizes
/// `A*` and the result is the empty automaton. The empty automaton itself
/// becomes a single accepting loop.
///
/// `FullyToFlip` takes a fully accepting one-pass po2dfa whose right-moving
/// states all read `◁`, makes every state non-final and sends every missing
/// transition to a new final right-moving sink. The `◁` requirement keeps
/// rejection local to letters and `▷`: a right-moving state without a
/// `◁`-transition would have to become final only at the end of the input,
/// which a flip automaton cannot express with the same states.
pub fn convert_flip_fully(t: &TwoWayAutomaton, direction: Conversion) -> Result<TwoWayAutomaton> {
    use TwoWayShape::*;
    match direction {
        Conversion::FlipToFully => {
            t.require(&[Flip, OnePass, PartiallyOrdered], true)?;
            let Some(x0) = t.initial() else {
                // the empty automaton recognizes nothing
                let al = t.alphabet().clone();
                let loops: Vec<_> = (0..al.len())
                    .map(Symbol::Letter)
                    .chain([Symbol::End])
                    .map(|s| (0, s, 0))
                    .collect();
                return TwoWayAutomaton::new(
                    al,
                    vec![("x".into(), Direction::Right)],
                    loops,
                    [0],
                    [0],
                );
            };
            if t.is_final(x0) {
                return Ok(TwoWayAutomaton::empty(t.alphabet().clone()));
            }
            let keep: Vec<StateId> = (0..t.num_states()).filter(|&q| !t.is_final(q)).collect();
            let map: HashMap<StateId, StateId> =
                keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
            let states = keep
                .iter()
                .map(|&q| (t.name(q).to_string(), t.direction(q)))
                .collect();
            let transitions: Vec<_> = t
                .transitions()
                .filter_map(|(p, s, q)| Some((*map.get(&p)?, s, *map.get(&q)?)))
                .collect();
            TwoWayAutomaton::new(
                t.alphabet().clone(),
                states,
                transitions,
                [map[&x0]],
                0..keep.len(),
            )
        }
        Conversion::FullyToFlip => {
            t.require(&[FullyAccepting, OnePass, PartiallyOrdered], false)?;
            if let Some(x) = t.right_states().find(|&x| t.step(x, Symbol::End).is_none()) {
                return Err(Error::Precondition(format!(
                    "right-moving state '{}' does not read ◁",
                    t.name(x)
                )));
            }
            let mut base = t.clone();
            base.finals.iter_mut().for_each(|f| *f = false);
            let (c, _) = base.complete_with_sink("accept", true);
            Ok(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{equivalent, parse_regex, to_minimal_dfa};
    use crate::two_way::fixtures;
    use crate::two_way::run::accepts;

    fn lang(t: &TwoWayAutomaton) -> crate::automata::Nfa {
        to_one_way_dfa(t).unwrap().to_nfa()
    }

    fn regex(re: &str, letters: &str) -> crate::automata::Nfa {
        parse_regex(re, &Alphabet::from_letters(letters).unwrap()).unwrap()
    }

    fn agrees_with_simulation(t: &TwoWayAutomaton, max_len: usize) {
        let d = to_one_way_dfa(t).unwrap();
        for w in t.alphabet().words_up_to(max_len) {
            assert_eq!(d.accepts(w.letters()), accepts(t, w.letters()), "{w:?}");
        }
    }

    #[test]
    fn empty_automaton_gives_empty_dfa() {
        let t = TwoWayAutomaton::empty(Alphabet::from_letters("ab").unwrap());
        assert!(crate::automata::is_empty_language(&lang(&t)));
        let c = complement_one_pass(&t).unwrap();
        assert!(equivalent(&lang(&c), &regex("(a|b)*", "ab")).unwrap());
    }

    #[test]
    fn fixtures_convert_faithfully() {
        for (_, t) in fixtures::all() {
            agrees_with_simulation(&t, 7);
        }
    }

    #[test]
    fn hierarchy_fixtures_have_their_languages() {
        let t = fixtures::first_ab_after_ac();
        assert!(equivalent(&lang(&t), &regex("(a|c)*ab(a|b|c)*", "abc")).unwrap());
        let t = fixtures::last_a_then_b();
        assert!(equivalent(&lang(&t), &regex("(a|b|c)*ab(b|c)*", "abc")).unwrap());
    }

    #[test]
    fn one_way_embedding_round_trips() {
        let d = to_minimal_dfa(&regex("(a|b)*ab", "ab"));
        let t = from_one_way(&d);
        assert!(t.has_shape(TwoWayShape::OnePass));
        assert!(equivalent(&lang(&t), &d.to_nfa()).unwrap());
    }

    #[test]
    fn complement_is_exact_and_involutive() {
        for (_, t) in fixtures::all() {
            if !t.has_shape(TwoWayShape::OnePass) || !t.has_shape(TwoWayShape::PartiallyOrdered) {
                continue;
            }
            let c = complement_one_pass(&t).unwrap();
            let both = crate::automata::combine(
                &to_one_way_dfa(&t).unwrap(),
                &to_one_way_dfa(&c).unwrap(),
                crate::automata::BoolOp::Intersection,
            )
            .unwrap();
            assert!(crate::automata::is_empty_language(&both.to_nfa()));
            let cc = complement_one_pass(&c).unwrap();
            assert!(equivalent(&lang(&cc), &lang(&t)).unwrap());
            agrees_with_simulation(&c, 6);
        }
    }

    #[test]
    fn complement_of_seek_a_has_no_a() {
        let t = crate::two_way::compile_ranker(
            &"Xa".parse().unwrap(),
            &Alphabet::from_letters("abc").unwrap(),
        )
        .unwrap();
        let c = complement_one_pass(&t).unwrap();
        assert!(equivalent(&lang(&c), &regex("(b|c)*", "abc")).unwrap());
    }

    #[test]
    fn flip_and_fully_conversions_complement() {
        let al = Alphabet::from_letters("abc").unwrap();
        let xa = crate::two_way::compile_ranker(&"Xa".parse().unwrap(), &al).unwrap();
        let (xa, _) = xa.complete_with_sink("sink", false);
        let fully = convert_flip_fully(&xa, Conversion::FlipToFully).unwrap();
        assert!(fully.has_shape(TwoWayShape::FullyAccepting));
        assert!(equivalent(&lang(&fully), &regex("(b|c)*", "abc")).unwrap());
        let flip = convert_flip_fully(&fully, Conversion::FullyToFlip).unwrap();
        assert!(flip.has_shape(TwoWayShape::Flip) && flip.is_complete());
        assert!(equivalent(&lang(&flip), &lang(&xa)).unwrap());
        let back = convert_flip_fully(&flip, Conversion::FlipToFully).unwrap();
        assert!(equivalent(&lang(&back), &lang(&fully)).unwrap());
    }

    #[test]
    fn nothing_flips_to_everything() {
        let t = TwoWayAutomaton::empty(Alphabet::from_letters("ab").unwrap());
        let fully = convert_flip_fully(&t, Conversion::FlipToFully).unwrap();
        assert!(fully.has_shape(TwoWayShape::FullyAccepting));
        assert!(equivalent(&lang(&fully), &regex("(a|b)*", "ab")).unwrap());
    }

    #[test]
    fn everything_flips_to_nothing() {
        let al = Alphabet::from_letters("ab").unwrap();
        let mut b = crate::two_way::Builder::new(al);
        let x = b.state("x", Direction::Right, true);
        b.initial(x).edges(x, "ab<", x);
        let t = b.build().unwrap();
        let flip = convert_flip_fully(&t, Conversion::FullyToFlip).unwrap();
        assert!(crate::automata::is_empty_language(&lang(&flip)));
        let back = convert_flip_fully(&flip, Conversion::FlipToFully).unwrap();
        assert!(equivalent(&lang(&back), &regex("(a|b)*", "ab")).unwrap());
    }

    #[test]
    fn conversions_check_shapes() {
        let t = fixtures::last_a_then_b();
        assert!(convert_flip_fully(&t, Conversion::FlipToFully).is_err());
        assert!(complement_one_pass(&t).is_err());
    }
}
