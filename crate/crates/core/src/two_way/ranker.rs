use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::two_way::{Builder, Direction, Symbol, TwoWayAutomaton};

/// `X_a` (next `a` to the right) or `Y_a` (previous `a` to the left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modality {
    pub direction: Direction,
    pub letter: char,
}

/// Non-empty sequence of modalities, written `Xa Yb Xc` (spaces optional).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranker(Vec<Modality>);

impl Ranker {
    pub fn new(modalities: Vec<Modality>) -> Result<Self> {
        if modalities.is_empty() {
            return Err(Error::RankerSyntax(
                "a ranker needs at least one modality".into(),
            ));
        }
        Ok(Self(modalities))
    }

    pub fn modalities(&self) -> &[Modality] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_x_ranker(&self) -> bool {
        self.0[0].direction == Direction::Right
    }
}

impl FromStr for Ranker {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut chars = text.chars().filter(|c| !c.is_whitespace());
        let mut out = Vec::new();
        while let Some(m) = chars.next() {
            let direction = match m {
                'X' => Direction::Right,
                'Y' => Direction::Left,
                c => return Err(Error::RankerSyntax(format!("expected X or Y, found '{c}'"))),
            };
            let letter = chars
                .next()
                .ok_or_else(|| Error::RankerSyntax(format!("'{m}' needs a letter")))?;
            out.push(Modality { direction, letter });
        }
        Ranker::new(out)
    }
}

impl fmt::Display for Ranker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let d = if m.direction == Direction::Right {
                'X'
            } else {
                'Y'
            };
            write!(f, "{d}{}", m.letter)?;
        }
        Ok(())
    }
}

impl Serialize for Ranker {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// 1-based position picked out by `r` in `w`, or `None` when undefined.
/// X-rankers start before the first letter, Y-rankers after the last.
pub fn eval_ranker(r: &Ranker, w: &str) -> Option<usize> {
    let w: Vec<char> = w.chars().collect();
    let mut i = if r.is_x_ranker() { 0 } else { w.len() + 1 };
    for m in r.modalities() {
        i = match m.direction {
            Direction::Right => (i + 1..=w.len()).find(|&j| w[j - 1] == m.letter)?,
            Direction::Left => (1..i).rev().find(|&j| w[j - 1] == m.letter)?,
        };
    }
    Some(i)
}

/// One state per modality plus a final right-moving `done` state. The state
/// for a modality searches in its own direction, looping on other letters,
/// and moves into the next modality's state on its letter; the head then
/// moves in the direction of the next search. A right-moving search that
/// reaches `◁` loops there without accepting; a left-moving one that reaches
/// `▷` has no transition.
pub fn compile_ranker(r: &Ranker, alphabet: &Alphabet) -> Result<TwoWayAutomaton> {
    if !r.is_x_ranker() {
        return Err(Error::Precondition(
            "only X-rankers compile; reverse the ranker and the language for Y-rankers".into(),
        ));
    }
    let mut b = Builder::new(alphabet.clone());
    let ids: Vec<_> = r
        .modalities()
        .iter()
        .enumerate()
        .map(|(i, m)| b.state(&format!("{i}:{}", fmt_modality(m)), m.direction, false))
        .collect();
    let done = b.state("done", Direction::Right, true);
    b.initial(ids[0]);
    for (i, m) in r.modalities().iter().enumerate() {
        let target = alphabet.index_of(m.letter)?;
        let next = ids.get(i + 1).copied().unwrap_or(done);
        for a in alphabet.iter() {
            let to = if a == target { next } else { ids[i] };
            b.edge(ids[i], Symbol::Letter(a), to);
        }
        if m.direction == Direction::Right {
            b.edge(ids[i], Symbol::End, ids[i]);
        }
    }
    for a in alphabet.iter() {
        b.edge(done, Symbol::Letter(a), done);
    }
    b.edge(done, Symbol::End, done);
    b.build()
}

fn fmt_modality(m: &Modality) -> String {
    let d = if m.direction == Direction::Right {
        'X'
    } else {
        'Y'
    };
    format!("{d}{}", m.letter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_way::{simulate, TwoWayShape};

    fn r(s: &str) -> Ranker {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_the_classic_example() {
        assert_eq!(eval_ranker(&r("Xa Yb Xc"), "bac"), Some(3));
        assert_eq!(eval_ranker(&r("Xa Yb Xc"), "cba"), None);
        assert_eq!(eval_ranker(&r("Xa"), "a"), Some(1));
        assert_eq!(eval_ranker(&r("Ya"), "aba"), Some(3));
        assert_eq!(eval_ranker(&r("Ya Ya"), "aba"), Some(1));
    }

    #[test]
    fn parses_with_or_without_spaces() {
        assert_eq!(r("XaYbXc"), r("Xa Yb Xc"));
        assert_eq!(r("Xa Yb").to_string(), "Xa Yb");
        assert!("".parse::<Ranker>().is_err());
        assert!("Za".parse::<Ranker>().is_err());
        assert!("X".parse::<Ranker>().is_err());
    }

    #[test]
    fn compiled_sizes_and_shapes() {
        let al = Alphabet::from_letters("ab").unwrap();
        let t = compile_ranker(&r("Xa"), &al).unwrap();
        assert_eq!(t.num_states(), 2);
        let t = compile_ranker(&r("Xb Ya"), &al).unwrap();
        assert_eq!(t.num_states(), 3);
        for shape in [TwoWayShape::OnePass, TwoWayShape::PartiallyOrdered] {
            assert!(t.has_shape(shape));
        }
        let acc = |w: &str| {
            simulate(&t, al.word(w).unwrap().letters())
                .unwrap()
                .outcome
                .accepted()
        };
        assert!(acc("ab"));
        assert!(!acc("ba"));
        assert!(!acc("b"));
    }

    #[test]
    fn y_rankers_do_not_compile() {
        let al = Alphabet::from_letters("ab").unwrap();
        assert!(compile_ranker(&r("Ya"), &al).is_err());
        assert!(compile_ranker(&r("Xc"), &al).is_err());
    }

    #[test]
    fn compiled_rankers_accept_exactly_where_defined() {
        let al = Alphabet::from_letters("abc").unwrap();
        for text in ["Xa", "Xa Yb Xc", "Xb Ya", "Xa Xa", "Xc Yc Yb Xa"] {
            let rk = r(text);
            let t = compile_ranker(&rk, &al).unwrap();
            assert!(t.num_states() <= rk.len() + 2);
            for w in al.words_up_to(5) {
                let s = al.render(w.letters());
                let run = simulate(&t, w.letters()).unwrap();
                assert_eq!(
                    run.outcome.accepted(),
                    eval_ranker(&rk, &s).is_some(),
                    "{text} on {s}"
                );
            }
        }
    }
}
