//! Conversions between weak, flip and Staiger-Wagner automata, and the
//! decomposition of a Boolean combination of right ideals into differences
//! of right ideals.

mod staiger_wagner;

use serde::Serialize;

use crate::alphabet::{shortlex_cmp, Word};
use crate::automata::json::AutomatonJson;
use crate::automata::{Components, Dfa, Nfa, StateId};
use crate::classification::{check_shape, Shape};
use crate::error::{Error, Result};
use crate::monoid::{class_violation, syntactic_monoid, AcceptingSet, GreenKind};

pub use staiger_wagner::{
    sw_accepts, sw_to_nfa, to_staiger_wagner, StaigerWagnerAutomaton, StaigerWagnerJson,
    EXPLICIT_TABLE_LIMIT, MAX_SW_STATES,
};

/// Adds a state `f` that copies every transition into a final state and
/// makes it the only final state; `f` is initial iff some initial state is
/// final. `f` has no outgoing transitions, so the result is weak. Without
/// final states `f` could never be reached and is left out.
pub fn nfa_to_weak(a: &Nfa) -> Nfa {
    if a.finals().next().is_none() {
        return a.clone();
    }
    let f = a.num_states();
    let into_f = a
        .transitions()
        .filter(|&(_, _, q)| a.is_final(q))
        .map(|(p, x, _)| (p, x, f));
    let transitions: Vec<_> = a.transitions().chain(into_f).collect();
    let mut initial = a.initial().to_vec();
    if initial.iter().any(|&q| a.is_final(q)) {
        initial.push(f);
    }
    Nfa::new(a.alphabet().clone(), f + 1, transitions, initial, [f]).expect("one new state")
}

/// Deterministic flip automata with pairwise disjoint languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipUnion {
    pub parts: Vec<Dfa>,
}

impl FlipUnion {
    /// Union of the parts as one automaton.
    pub fn to_nfa(&self, alphabet: &crate::alphabet::Alphabet) -> Nfa {
        let mut offset = 0;
        let mut transitions = Vec::new();
        let mut initial = Vec::new();
        let mut finals = Vec::new();
        for d in &self.parts {
            transitions.extend(d.transitions().map(|(p, x, q)| (p + offset, x, q + offset)));
            initial.extend(d.initial().map(|q| q + offset));
            finals.extend(
                (0..d.num_states())
                    .filter(|&q| d.is_final(q))
                    .map(|q| q + offset),
            );
            offset += d.num_states();
        }
        Nfa::new(alphabet.clone(), offset, transitions, initial, finals).expect("disjoint copies")
    }

    pub fn to_json(&self) -> Vec<AutomatonJson> {
        self.parts.iter().map(AutomatonJson::from_dfa).collect()
    }
}

/// One part per final strongly connected component `C`: the states from
/// which `C` is reachable, with final states `C`. A part never leaves `C`
/// once inside, so it is flip; a run of `d` ends in exactly one component,
/// so the parts are disjoint and together recognize `L(d)`.
pub fn weak_to_flip_union(d: &Dfa) -> Result<FlipUnion> {
    if !check_shape(&d.to_nfa(), Shape::Weak) {
        return Err(Error::NotWeak);
    }
    let n = d.num_states();
    let al = d.alphabet();
    let comps = Components::compute(n, |q| {
        al.iter().filter_map(|x| d.step(q, x)).collect::<Vec<_>>()
    });
    let reach = comps.reachability();
    let mut finals: Vec<usize> = (0..comps.len())
        .filter(|&c| d.is_final(comps.members(c)[0]))
        .collect();
    finals.sort_by_key(|&c| comps.members(c).iter().min().copied());
    let parts = finals
        .into_iter()
        .map(|c| {
            let keep: Vec<bool> = (0..n)
                .map(|q| reach[comps.component_of(q)].contains(c))
                .collect();
            restrict(d, &keep, |q| comps.component_of(q) == c)
        })
        .collect();
    Ok(FlipUnion { parts })
}

/// Sub-automaton on the kept states, renumbered in order.
fn restrict(d: &Dfa, keep: &[bool], is_final: impl Fn(StateId) -> bool) -> Dfa {
    let Some(q0) = d.initial().filter(|&q| keep[q]) else {
        return Dfa::empty(d.alphabet().clone());
    };
    let ids: Vec<StateId> = (0..d.num_states()).filter(|&q| keep[q]).collect();
    let mut new = vec![usize::MAX; d.num_states()];
    for (i, &q) in ids.iter().enumerate() {
        new[q] = i;
    }
    let delta = ids
        .iter()
        .map(|&q| {
            d.alphabet()
                .iter()
                .map(|x| d.step(q, x).filter(|&r| keep[r]).map(|r| new[r]))
                .collect()
        })
        .collect();
    let finals = ids.iter().map(|&q| is_final(q)).collect();
    Dfa::new(d.alphabet().clone(), delta, Some(new[q0]), finals)
        .expect("restriction is well-formed")
}

/// `upper ∖ strict` for one R-class `R ⊆ h(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcPair {
    /// Shortlex-least word mapped into the class.
    pub representative: Word,
    /// `h⁻¹{x : x ≤_R R}`
    pub upper: Dfa,
    /// `h⁻¹{x : x <_R R}`
    pub strict: Dfa,
}

#[derive(Serialize)]
pub struct BcPairJson {
    pub representative: String,
    pub upper: AutomatonJson,
    pub strict: AutomatonJson,
}

impl BcPair {
    pub fn to_json(&self) -> BcPairJson {
        BcPairJson {
            representative: self.upper.alphabet().render(self.representative.letters()),
            upper: AutomatonJson::from_dfa(&self.upper),
            strict: AutomatonJson::from_dfa(&self.strict),
        }
    }
}

/// Writes `L` as the disjoint union of `upper ∖ strict` over the R-classes
/// contained in `h(L)`, where `h` is the syntactic morphism. Both sets are
/// right ideals of the monoid, so their preimages are right ideals. Pairs
/// are ordered by their representatives in shortlex order; the automata
/// are minimal.
pub fn bc_decomposition(d: &Dfa) -> Result<Vec<BcPair>> {
    let (m, p) = syntactic_monoid(d)?;
    let green = m.green();
    if let Some((i, o)) = class_violation(&green, &p, GreenKind::R) {
        let al = m.alphabet();
        return Err(Error::Precondition(format!(
            "not a Boolean combination of right ideals: '{}' and '{}' are R-equivalent but only the first is in the language",
            al.render(m.representative(i).letters()),
            al.render(m.representative(o).letters())
        )));
    }
    let mut pairs: Vec<BcPair> = green
        .classes(GreenKind::R)
        .iter()
        .filter(|class| p.contains(class[0]))
        .map(|class| {
            let r = class[0];
            let upper =
                AcceptingSet::new(m.elements().map(|x| green.le(GreenKind::R, x, r)).collect());
            let strict = AcceptingSet::new(
                m.elements()
                    .map(|x| green.le(GreenKind::R, x, r) && !green.equivalent(GreenKind::R, x, r))
                    .collect(),
            );
            let representative = class
                .iter()
                .map(|&x| m.representative(x))
                .min_by(|a, b| shortlex_cmp(a.letters(), b.letters()))
                .expect("classes are non-empty")
                .clone();
            BcPair {
                representative,
                upper: m.preimage_dfa(&upper).minimize(),
                strict: m.preimage_dfa(&strict).minimize(),
            }
        })
        .collect();
    pairs.sort_by(|a, b| shortlex_cmp(a.representative.letters(), b.representative.letters()));
    Ok(pairs)
}

/// `⋃ (upper ∖ strict)` as one DFA.
pub fn bc_union(pairs: &[BcPair], alphabet: &crate::alphabet::Alphabet) -> Result<Dfa> {
    use crate::automata::{combine, BoolOp};
    let mut acc = Dfa::empty(alphabet.clone()).complete();
    for pair in pairs {
        let diff = combine(&pair.upper, &pair.strict, BoolOp::Difference)?;
        acc = combine(&acc, &diff, BoolOp::Union)?;
    }
    Ok(acc.minimize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{
        combine, equivalent, is_empty_language, parse_regex, to_minimal_dfa, BoolOp,
    };
    use crate::monoid::{is_ideal_subset, IdealKind};
    use crate::random::{random_weak_dfa, seeded_rng};

    fn dfa(re: &str, letters: &str) -> Dfa {
        let al = Alphabet::from_letters(letters).unwrap();
        to_minimal_dfa(&parse_regex(re, &al).unwrap())
    }

    fn same(x: &Nfa, y: &Dfa) -> bool {
        equivalent(x, &y.to_nfa()).unwrap()
    }

    #[test]
    fn weak_embedding() {
        for re in ["ab(a|b)*", "%e", "(ab)*", "%0", "b*a"] {
            let d = dfa(re, "ab");
            let w = nfa_to_weak(&d.to_nfa());
            assert!(check_shape(&w, Shape::Weak), "{re}");
            assert!(same(&w, &d), "{re}");
        }
        let eps = nfa_to_weak(&dfa("%e", "ab").to_nfa());
        assert!(eps.initial().contains(&(eps.num_states() - 1)));
        assert!(eps.accepts(&[]));
        let none = dfa("%0", "ab").to_nfa();
        assert_eq!(nfa_to_weak(&none).num_states(), none.num_states());
    }

    fn check_flip_union(d: &Dfa) -> FlipUnion {
        let u = weak_to_flip_union(d).unwrap();
        for (i, p) in u.parts.iter().enumerate() {
            assert!(check_shape(&p.to_nfa(), Shape::Flip));
            for q in &u.parts[i + 1..] {
                let both = combine(p, q, BoolOp::Intersection).unwrap();
                assert!(is_empty_language(&both.to_nfa()));
            }
        }
        assert!(same(&u.to_nfa(d.alphabet()), d));
        u
    }

    #[test]
    fn flip_unions() {
        assert_eq!(check_flip_union(&dfa("ab(a|b)*", "ab")).parts.len(), 1);
        assert_eq!(check_flip_union(&dfa("a(a|b)*|bb*", "ab")).parts.len(), 2);
        assert!(check_flip_union(&dfa("%0", "ab")).parts.is_empty());
        assert_eq!(weak_to_flip_union(&dfa("(ab)*", "ab")), Err(Error::NotWeak));
        let mut rng = seeded_rng(5);
        for _ in 0..100 {
            check_flip_union(&random_weak_dfa(&mut rng, 6, 3));
        }
    }

    fn check_bc(d: &Dfa) -> Vec<BcPair> {
        let pairs = bc_decomposition(d).unwrap();
        let (m, _) = syntactic_monoid(d).unwrap();
        for pair in &pairs {
            for ideal in [&pair.upper, &pair.strict] {
                let s = m
                    .recognized_subset(ideal)
                    .unwrap()
                    .expect("recognized by h");
                assert!(is_ideal_subset(&m, &s, IdealKind::Right));
            }
        }
        assert!(same(&bc_union(&pairs, d.alphabet()).unwrap().to_nfa(), d));
        pairs
    }

    #[test]
    fn decompositions() {
        let all = check_bc(&dfa("(a|b)*", "ab"));
        assert_eq!(all.len(), 1);
        assert!(is_empty_language(&all[0].strict.to_nfa()));
        assert!(same(&all[0].upper.to_nfa(), &dfa("(a|b)*", "ab")));
        check_bc(&dfa("b*a", "ab"));
        check_bc(&dfa("ab(a|b)*", "ab"));
        check_bc(&dfa("%0", "ab"));
        let mut rng = seeded_rng(9);
        for _ in 0..100 {
            check_bc(&random_weak_dfa(&mut rng, 6, 3));
        }
    }

    #[test]
    fn decomposition_needs_a_boolean_combination() {
        let d = dfa("(a|b|c)*ab(b|c)*", "abc");
        assert!(matches!(bc_decomposition(&d), Err(Error::Precondition(_))));
    }

    #[test]
    fn pairs_are_ordered_by_representative() {
        let pairs = check_bc(&dfa("b*a|ab(a|b)*", "ab"));
        for w in pairs.windows(2) {
            assert!(
                shortlex_cmp(w[0].representative.letters(), w[1].representative.letters()).is_lt()
            );
        }
    }
}
