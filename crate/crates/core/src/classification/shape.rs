use serde::Serialize;

use crate::automata::{strongly_connected_components, Nfa};

/// Structural automaton shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// No transition leaves the final states.
    Flip,
    /// Every state is final.
    FullyAccepting,
    /// Every state is initial and final.
    Path,
    /// Every strongly connected component is entirely final or entirely
    /// non-final.
    Weak,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Flip => "flip",
            Shape::FullyAccepting => "fully_accepting",
            Shape::Path => "path",
            Shape::Weak => "weak",
        }
    }

    pub fn parse(name: &str) -> Option<Shape> {
        [Shape::Flip, Shape::FullyAccepting, Shape::Path, Shape::Weak]
            .into_iter()
            .find(|s| s.name() == name || s.name().replace('_', "-") == name)
    }
}

/// Purely structural; the meaning of a verdict depends on the automaton
/// variant it is run on.
pub fn check_shape(a: &Nfa, shape: Shape) -> bool {
    let n = a.num_states();
    match shape {
        Shape::Flip => a
            .transitions()
            .all(|(p, _, q)| !a.is_final(p) || a.is_final(q)),
        Shape::FullyAccepting => (0..n).all(|q| a.is_final(q)),
        Shape::Path => (0..n).all(|q| a.is_final(q) && a.is_initial(q)),
        Shape::Weak => strongly_connected_components(a)
            .components()
            .iter()
            .all(|c| c.iter().all(|&q| a.is_final(q) == a.is_final(c[0]))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{parse_regex, to_minimal_dfa};

    fn min(re: &str) -> crate::automata::Dfa {
        let al = Alphabet::from_letters("ab").unwrap();
        to_minimal_dfa(&parse_regex(re, &al).unwrap())
    }

    #[test]
    fn right_ideal_is_flip_when_complete() {
        assert!(check_shape(&min("ab(a|b)*").to_nfa(), Shape::Flip));
        assert!(!check_shape(&min("ab").to_nfa(), Shape::Flip));
    }

    #[test]
    fn prefixes_of_ab_are_fully_accepting_when_trim() {
        let d = min("%e|a|ab");
        assert!(check_shape(&d.trim().to_nfa(), Shape::FullyAccepting));
        // the complete automaton keeps its rejecting sink
        assert!(!check_shape(&d.to_nfa(), Shape::FullyAccepting));
    }

    #[test]
    fn single_looping_state_is_a_path_automaton() {
        let al = Alphabet::from_letters("ab").unwrap();
        let a = Nfa::new(al, 1, [(0, 0, 0), (0, 1, 0)], [0], [0]).unwrap();
        assert!(check_shape(&a, Shape::Path));
        assert!(check_shape(&a, Shape::Weak));
    }

    #[test]
    fn weak_detects_mixed_components() {
        assert!(check_shape(&min("ab(a|b)*|b").to_nfa(), Shape::Weak));
        assert!(!check_shape(&min("(a|b)*a").to_nfa(), Shape::Weak));
    }

    #[test]
    fn names_round_trip() {
        for s in [Shape::Flip, Shape::FullyAccepting, Shape::Path, Shape::Weak] {
            assert_eq!(Shape::parse(s.name()), Some(s));
        }
        assert_eq!(Shape::parse("fully-accepting"), Some(Shape::FullyAccepting));
    }
}
