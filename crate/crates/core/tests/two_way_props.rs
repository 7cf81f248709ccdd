//! Random two-way automata against their one-way translations.

use regideal::automata::{complement, equivalent};
use regideal::random::{random_two_way, seeded_rng};
use regideal::two_way::{
    complement_one_pass, simulate, to_one_way_dfa, TwoWayAutomaton, TwoWayShape,
};
use regideal::Alphabet;

const TRIALS: usize = 300;
const MAX_LEN: usize = 6;

fn agree(t: &TwoWayAutomaton) {
    let d = to_one_way_dfa(t).unwrap();
    for w in t.alphabet().words_up_to(MAX_LEN) {
        let got = simulate(t, w.letters()).unwrap().outcome.accepted();
        assert_eq!(got, d.accepts(w.letters()), "word {w:?}");
    }
}

#[test]
fn arbitrary_automata_simulate_like_their_translation() {
    let mut rng = seeded_rng(11);
    for i in 0..TRIALS {
        let states = 1 + i % 5;
        let t = random_two_way(&mut rng, states, 1 + i % 3, false, false);
        agree(&t);
    }
}

#[test]
fn one_pass_po_automata_simulate_like_their_translation() {
    let mut rng = seeded_rng(12);
    for i in 0..TRIALS {
        let t = random_two_way(&mut rng, 1 + i % 6, 1 + i % 3, true, true);
        assert!(t.has_shape(TwoWayShape::PartiallyOrdered));
        assert!(t.has_shape(TwoWayShape::OnePass));
        agree(&t);
    }
}

#[test]
fn one_pass_complement_is_exact() {
    let mut rng = seeded_rng(13);
    for i in 0..TRIALS {
        let t = random_two_way(&mut rng, 1 + i % 6, 1 + i % 3, true, true);
        let want = complement(&to_one_way_dfa(&t).unwrap().complete()).unwrap();
        let c = complement_one_pass(&t).unwrap();
        assert!(c.has_shape(TwoWayShape::OnePass));
        let got = to_one_way_dfa(&c).unwrap();
        assert!(equivalent(&got.to_nfa(), &want.to_nfa()).unwrap());
        agree(&c);
    }
}

#[test]
fn empty_automaton_has_an_empty_language() {
    let t = TwoWayAutomaton::empty(Alphabet::from_letters("ab").unwrap());
    let d = to_one_way_dfa(&t).unwrap();
    assert!(t
        .alphabet()
        .words_up_to(4)
        .iter()
        .all(|w| !d.accepts(w.letters())));
}
