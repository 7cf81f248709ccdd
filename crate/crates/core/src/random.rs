//! Seeded generators for randomized testing.
//!
//! Every generator takes an explicit RNG. [`seeded_rng`] lets the
//! `REGIDEAL_SEED` environment variable override a test's default seed so
//! that failures can be replayed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::automata::{Components, Dfa};
use crate::two_way::{Direction, Symbol, TwoWayAutomaton};

pub const SEED_VAR: &str = "REGIDEAL_SEED";

pub fn seeded_rng(default_seed: u64) -> ChaCha8Rng {
    let seed = std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first `k` letters of `abc…`.
pub fn alphabet_of_size(k: usize) -> Alphabet {
    Alphabet::from_letters(&"abcdefgh"[..k]).expect("1 ≤ k ≤ 8")
}

/// Uniformly random complete DFA with the given sizes; finality is a fair
/// coin per state.
pub fn random_complete_dfa<R: Rng>(rng: &mut R, states: usize, letters: usize) -> Dfa {
    let alphabet = alphabet_of_size(letters);
    let delta = (0..states)
        .map(|_| {
            (0..letters)
                .map(|_| Some(rng.gen_range(0..states)))
                .collect()
        })
        .collect();
    let finals = (0..states).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(alphabet, delta, Some(0), finals).expect("well-formed")
}

/// Minimal complete DFA of a random complete DFA with at most `max_states`
/// states over at most `max_letters` letters.
pub fn random_minimal_dfa<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    random_complete_dfa(rng, n, k).minimize()
}

/// Random complete DFA whose finality is constant on each strongly connected
/// component, hence weak.
pub fn random_weak_dfa<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_letters);
    let d = random_complete_dfa(rng, n, k);
    let comps = Components::compute(n, |q| {
        (0..k)
            .map(|a| d.step(q, a).expect("complete"))
            .collect::<Vec<_>>()
    });
    let flags: Vec<bool> = (0..comps.len()).map(|_| rng.gen_bool(0.5)).collect();
    d.with_finals((0..n).map(|q| flags[comps.component_of(q)]).collect())
}

/// Random deterministic two-way automaton over the first `letters` letters.
/// State 0 is right-moving and initial; other directions and finality are
/// fair coins. Each required transition is present with probability 0.9.
///
/// With `partially_ordered`, transitions only lead to the same or a later
/// state; with `one_pass`, `◁` is always read by a self-loop.
pub fn random_two_way<R: Rng>(
    rng: &mut R,
    states: usize,
    letters: usize,
    partially_ordered: bool,
    one_pass: bool,
) -> TwoWayAutomaton {
    let alphabet = alphabet_of_size(letters);
    let dirs: Vec<Direction> = (0..states)
        .map(|q| {
            if q == 0 || rng.gen_bool(0.5) {
                Direction::Right
            } else {
                Direction::Left
            }
        })
        .collect();
    let mut transitions = Vec::new();
    for q in 0..states {
        let lo = if partially_ordered { q } else { 0 };
        let marker = if dirs[q] == Direction::Right {
            Symbol::End
        } else {
            Symbol::Begin
        };
        let symbols = (0..letters).map(Symbol::Letter).chain([marker]);
        for s in symbols.collect::<Vec<_>>() {
            if !rng.gen_bool(0.9) {
                continue;
            }
            let target = match s {
                Symbol::End if one_pass => Some(q),
                Symbol::Begin => {
                    let right: Vec<usize> = (lo..states)
                        .filter(|&r| dirs[r] == Direction::Right)
                        .collect();
                    (!right.is_empty()).then(|| right[rng.gen_range(0..right.len())])
                }
                _ => Some(rng.gen_range(lo..states)),
            };
            if let Some(r) = target {
                transitions.push((q, s, r));
            }
        }
    }
    let finals: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    let names = (0..states).map(|q| (format!("z{q}"), dirs[q])).collect();
    TwoWayAutomaton::new(alphabet, names, transitions, [0], finals).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(
                random_minimal_dfa(&mut r1, 6, 3),
                random_minimal_dfa(&mut r2, 6, 3)
            );
        }
    }

    #[test]
    fn weak_dfas_are_weak() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let d = random_weak_dfa(&mut rng, 6, 3);
            let comps = crate::automata::strongly_connected_components(&d.to_nfa());
            for c in comps.components() {
                assert!(c.iter().all(|&q| d.is_final(q) == d.is_final(c[0])));
            }
        }
    }

    #[test]
    fn random_two_way_automata_are_valid() {
        use crate::two_way::TwoWayShape;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_two_way(&mut rng, 5, 2, true, true);
            assert!(t.validate().is_empty());
            assert!(t.has_shape(TwoWayShape::PartiallyOrdered));
            assert!(t.has_shape(TwoWayShape::OnePass));
            assert!(random_two_way(&mut rng, 5, 2, false, false)
                .validate()
                .is_empty());
        }
    }
}
