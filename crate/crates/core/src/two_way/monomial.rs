use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{combine, compare, BoolOp, CompareMode, Dfa, Nfa};
use crate::error::{Error, Result};
use crate::two_way::{run, to_one_way_dfa, TwoWayAutomaton, TwoWayShape};

/// Longest word examined by [`extract_monomials`] unless told otherwise.
pub const DEFAULT_EXTRACTION_CAP: usize = 12;

/// `A₁* a₁ A₂* a₂ ⋯ A_k* a_k A_{k+1}*`. An empty block stands for `{ε}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    alphabet: Alphabet,
    blocks: Vec<BTreeSet<Letter>>,
    markers: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialCheck {
    /// Every member has exactly one block factorization.
    Unambiguous,
    /// No `i` with `{a_i, …, a_k} ⊆ A_i`.
    Restricted,
}

impl MonomialCheck {
    pub fn parse(name: &str) -> Option<MonomialCheck> {
        match name {
            "unambiguous" => Some(MonomialCheck::Unambiguous),
            "restricted" => Some(MonomialCheck::Restricted),
            _ => None,
        }
    }
}

impl Monomial {
    pub fn new(
        alphabet: Alphabet,
        blocks: Vec<BTreeSet<Letter>>,
        markers: Vec<Letter>,
    ) -> Result<Self> {
        if blocks.len() != markers.len() + 1 {
            return Err(Error::Malformed(format!(
                "a monomial with {} markers needs {} blocks, found {}",
                markers.len(),
                markers.len() + 1,
                blocks.len()
            )));
        }
        let k = alphabet.len();
        if blocks.iter().flatten().chain(&markers).any(|&a| a >= k) {
            return Err(Error::Malformed("letter index out of range".into()));
        }
        Ok(Self {
            alphabet,
            blocks,
            markers,
        })
    }

    /// `A*` as a monomial without markers.
    pub fn full(alphabet: Alphabet) -> Self {
        let all = alphabet.iter().collect();
        Self {
            alphabet,
            blocks: vec![all],
            markers: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn blocks(&self) -> &[BTreeSet<Letter>] {
        &self.blocks
    }

    pub fn markers(&self) -> &[Letter] {
        &self.markers
    }

    /// Number of markers.
    pub fn degree(&self) -> usize {
        self.markers.len()
    }

    pub fn to_json(&self) -> MonomialJson {
        let c = |a: &Letter| self.alphabet.char_of(*a).to_string();
        MonomialJson {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(c).collect())
                .collect(),
            markers: self.markers.iter().map(c).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = |b: &BTreeSet<Letter>| {
            let letters: Vec<String> = b
                .iter()
                .map(|&a| self.alphabet.char_of(a).to_string())
                .collect();
            format!("{{{}}}*", letters.join(","))
        };
        let mut parts = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if !b.is_empty() {
                parts.push(block(b));
            }
            if let Some(&a) = self.markers.get(i) {
                parts.push(self.alphabet.char_of(a).to_string());
            }
        }
        if parts.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Interchange form; empty blocks are written as `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub blocks: Vec<Vec<String>>,
    pub markers: Vec<String>,
}

impl MonomialJson {
    pub fn to_monomial(&self, alphabet: &Alphabet) -> Result<Monomial> {
        let letter = |s: &String| alphabet.index_of(crate::automata::json::single_char(s)?);
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(letter).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let markers = self
            .markers
            .iter()
            .map(letter)
            .collect::<Result<Vec<_>>>()?;
        Monomial::new(alphabet.clone(), blocks, markers)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// States `0..=k`; state `i` loops on `A_{i+1}` and moves to `i+1` on
/// `a_{i+1}`. Accepting runs correspond one-to-one to factorizations.
pub fn monomial_nfa(p: &Monomial) -> Nfa {
    let k = p.degree();
    let loops = p
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |&a| (i, a, i)));
    let steps = p.markers.iter().enumerate().map(|(i, &a)| (i, a, i + 1));
    Nfa::new(
        p.alphabet.clone(),
        k + 1,
        loops.chain(steps).collect::<Vec<_>>(),
        [0],
        [k],
    )
    .expect("indices are in range")
}

pub fn monomial_check(p: &Monomial, which: MonomialCheck) -> bool {
    match which {
        MonomialCheck::Unambiguous => unambiguous(&monomial_nfa(p)),
        MonomialCheck::Restricted => {
            (0..p.degree()).all(|i| !p.markers[i..].iter().all(|a| p.blocks[i].contains(a)))
        }
    }
}

/// Two distinct accepting runs on one word exist iff the square of the
/// automaton has a useful pair of distinct states.
fn unambiguous(a: &Nfa) -> bool {
    let n = a.num_states();
    let k = a.alphabet().len();
    let pair = |p: usize, q: usize| p * n + q;
    let mut transitions = Vec::new();
    for p in 0..n {
        for q in 0..n {
            for x in 0..k {
                for &p2 in a.successors(p, x) {
                    for &q2 in a.successors(q, x) {
                        transitions.push((pair(p, q), x, pair(p2, q2)));
                    }
                }
            }
        }
    }
    let initial: Vec<_> = a
        .initial()
        .iter()
        .flat_map(|&p| a.initial().iter().map(move |&q| pair(p, q)))
        .collect();
    let finals: Vec<_> = a
        .finals()
        .flat_map(|p| a.finals().map(move |q| pair(p, q)))
        .collect();
    let square = Nfa::new(a.alphabet().clone(), n * n, transitions, initial, finals)
        .expect("indices are in range");
    let (acc, co) = (square.accessible_states(), square.coaccessible_states());
    (0..n).all(|p| (0..n).all(|q| p == q || !(acc[pair(p, q)] && co[pair(p, q)])))
}

/// Covers `L(t)` by monomials `P(u)` read off accepting runs.
///
/// Accepted words are visited in shortlex order, skipping those already
/// covered. For a new word `u` the run is followed until it first enters a
/// final state; the positions at which the state changed give the markers,
/// the letters strictly between them give the blocks, and the last block is
/// `A*`. Every `P(u)` is checked for `P(u) ⊆ L(t)` and for unambiguity, and
/// the search stops once the union equals `L(t)`. Words longer than `cap`
/// are never examined; reaching that bound without closing is an error.
pub fn extract_monomials(t: &TwoWayAutomaton, cap: usize) -> Result<Vec<Monomial>> {
    use TwoWayShape::*;
    t.require(&[PartiallyOrdered, OnePass, Flip], true)?;
    if !t.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let al = t.alphabet().clone();
    let target = to_one_way_dfa(t)?.minimize();
    let target_nfa = target.to_nfa();
    let mut out = Vec::new();
    let mut union = Dfa::empty(al.clone()).complete();
    if equal(&union, &target)? {
        return Ok(out);
    }
    for len in 0..=cap {
        for w in al.words_of_len(len) {
            let u = w.letters();
            if union.accepts(u) || !target.accepts(u) {
                continue;
            }
            let p = monomial_of_run(t, u);
            let nfa = monomial_nfa(&p);
            let inside = compare(&nfa, &target_nfa, CompareMode::Included)?;
            if !inside.holds {
                let witness = inside
                    .counterexample
                    .map(|c| al.render(c.letters()))
                    .unwrap_or_default();
                return Err(Error::Extraction(format!(
                    "P({}) = {p} contains '{witness}', which is not accepted",
                    al.render(u)
                )));
            }
            if !monomial_check(&p, MonomialCheck::Unambiguous) {
                return Err(Error::Extraction(format!(
                    "P({}) = {p} is ambiguous",
                    al.render(u)
                )));
            }
            union = combine(&union, &nfa.determinize(), BoolOp::Union)?.minimize();
            out.push(p);
            if equal(&union, &target)? {
                return Ok(out);
            }
        }
    }
    Err(Error::Extraction(format!(
        "monomials found up to length {cap} do not cover the language"
    )))
}

fn equal(x: &Dfa, y: &Dfa) -> Result<bool> {
    crate::automata::equivalent(&x.to_nfa(), &y.to_nfa())
}

fn monomial_of_run(t: &TwoWayAutomaton, u: &[Letter]) -> Monomial {
    let al = t.alphabet().clone();
    let trace = run::run(t, u).trace;
    let mut positions = BTreeSet::new();
    for step in trace.windows(2) {
        let (from, to) = (step[0], step[1]);
        if t.is_final(from.state) {
            break;
        }
        if from.state != to.state && (1..=u.len()).contains(&from.position) {
            positions.insert(from.position);
        }
        if t.is_final(to.state) {
            break;
        }
    }
    let mut blocks = Vec::new();
    let mut markers = Vec::new();
    let mut last = 0;
    for &i in &positions {
        blocks.push(u[last..i - 1].iter().copied().collect());
        markers.push(u[i - 1]);
        last = i;
    }
    blocks.push(al.iter().collect());
    Monomial {
        alphabet: al,
        blocks,
        markers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, parse_regex};
    use crate::two_way::{fixtures, Builder, Direction};

    fn abc() -> Alphabet {
        Alphabet::from_letters("abc").unwrap()
    }

    fn set(al: &Alphabet, s: &str) -> BTreeSet<Letter> {
        s.chars().map(|c| al.index_of(c).unwrap()).collect()
    }

    fn mono(al: &Alphabet, blocks: &[&str], markers: &str) -> Monomial {
        Monomial::new(
            al.clone(),
            blocks.iter().map(|b| set(al, b)).collect(),
            markers.chars().map(|c| al.index_of(c).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn checks_on_small_monomials() {
        let al = abc();
        let p = mono(&al, &["ac", "", "abc"], "ab");
        assert!(monomial_check(&p, MonomialCheck::Unambiguous));
        assert!(monomial_check(&p, MonomialCheck::Restricted));
        let a = Alphabet::from_letters("a").unwrap();
        let q = mono(&a, &["a", "a"], "a");
        assert!(!monomial_check(&q, MonomialCheck::Unambiguous));
        assert!(!monomial_check(&q, MonomialCheck::Restricted));
        assert!(monomial_check(
            &Monomial::full(al),
            MonomialCheck::Unambiguous
        ));
    }

    #[test]
    fn nfa_recognizes_the_monomial() {
        let al = abc();
        let p = mono(&al, &["ac", "", "abc"], "ab");
        let want = parse_regex("(a|c)*ab(a|b|c)*", &al).unwrap();
        assert!(equivalent(&monomial_nfa(&p), &want).unwrap());
    }

    #[test]
    fn json_keeps_empty_blocks() {
        let al = abc();
        let p = mono(&al, &["ac", "", "abc"], "ab");
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"blocks":[["a","c"],[],["a","b","c"]],"markers":["a","b"]}"#
        );
        assert_eq!(
            MonomialJson::parse(&text)
                .unwrap()
                .to_monomial(&al)
                .unwrap(),
            p
        );
        assert!(MonomialJson::parse(r#"{"blocks":[],"markers":[]}"#)
            .unwrap()
            .to_monomial(&al)
            .is_err());
    }

    #[test]
    fn extraction_covers_the_fixture() {
        let t = fixtures::first_ab_after_ac();
        let ms = extract_monomials(&t, DEFAULT_EXTRACTION_CAP).unwrap();
        assert!(!ms.is_empty());
        let al = t.alphabet().clone();
        let mut union = Dfa::empty(al.clone()).complete();
        for m in &ms {
            assert!(monomial_check(m, MonomialCheck::Unambiguous));
            assert!(m.degree() <= t.num_states());
            union = combine(&union, &monomial_nfa(m).determinize(), BoolOp::Union).unwrap();
        }
        let want = parse_regex("(a|c)*ab(a|b|c)*", &al).unwrap();
        assert!(equivalent(&union.to_nfa(), &want).unwrap());
    }

    #[test]
    fn trivial_extractions() {
        let al = abc();
        let mut b = Builder::new(al.clone());
        let x = b.state("x", Direction::Right, true);
        b.initial(x).edges(x, "abc<", x);
        let all = b.build().unwrap();
        assert_eq!(
            extract_monomials(&all, 4).unwrap(),
            vec![Monomial::full(al.clone())]
        );

        let mut b = Builder::new(al);
        let x = b.state("x", Direction::Right, false);
        b.initial(x).edges(x, "abc<", x);
        assert!(extract_monomials(&b.build().unwrap(), 4)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn extraction_needs_a_flip_automaton() {
        assert!(extract_monomials(&fixtures::last_a_then_b(), 4).is_err());
    }
}
