//! Finite monoids given by multiplication tables, the transition monoid of a
//! complete DFA, Green's relations and the monoid-level decision procedures.
//!
//! Composition order: the element of a word `uv` is the element of `u`
//! followed by the element of `v`, acting on states left to right. Getting
//! this backwards silently swaps R and L.

mod green;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::automata::Dfa;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub use green::{GreenKind, GreenStructure};

pub type Element = usize;

/// Largest monoid we are willing to tabulate (the table has `size²` entries).
pub const MAX_MONOID_SIZE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    alphabet: Alphabet,
    size: usize,
    table: Vec<Element>,
    identity: Element,
    generators: Vec<Element>,
    representatives: Vec<Word>,
    /// `right[x * k + a] = x · h(a)`
    right: Vec<Element>,
}

/// A subset `P` of a monoid, typically `h(L)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AcceptingSet {
    members: Vec<bool>,
}

impl AcceptingSet {
    pub fn new(members: Vec<bool>) -> Self {
        Self { members }
    }

    pub fn from_elements(size: usize, elements: impl IntoIterator<Item = Element>) -> Self {
        let mut members = vec![false; size];
        for e in elements {
            members[e] = true;
        }
        Self { members }
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members[x]
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.members.len()).filter(|&x| self.members[x])
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.contains(&true)
    }

    pub fn complement(&self) -> AcceptingSet {
        Self::new(self.members.iter().map(|b| !b).collect())
    }

    pub fn flags(&self) -> &[bool] {
        &self.members
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    Right,
    Left,
    TwoSided,
}

impl FiniteMonoid {
    /// Builds a monoid from an explicit table. Elements must all be products
    /// of the generators; associativity and the identity law are verified.
    pub fn from_table(
        alphabet: Alphabet,
        table: Vec<Vec<Element>>,
        identity: Element,
        generators: Vec<Element>,
    ) -> Result<Self> {
        let size = table.len();
        if size == 0 || identity >= size {
            return Err(Error::Malformed("monoid needs an identity element".into()));
        }
        if generators.len() != alphabet.len() || generators.iter().any(|&g| g >= size) {
            return Err(Error::Malformed(
                "one generator per letter is required".into(),
            ));
        }
        if table
            .iter()
            .any(|row| row.len() != size || row.iter().any(|&x| x >= size))
        {
            return Err(Error::Malformed(
                "table must be square over the elements".into(),
            ));
        }
        let flat: Vec<Element> = table.into_iter().flatten().collect();
        let k = alphabet.len();
        let mut right = vec![0; size * k];
        for x in 0..size {
            for (a, &g) in generators.iter().enumerate() {
                right[x * k + a] = flat[x * size + g];
            }
        }
        // shortlex representatives by BFS from the identity
        let mut reps: Vec<Option<Word>> = vec![None; size];
        reps[identity] = Some(Word::empty());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for a in 0..k {
                let y = right[x * k + a];
                if reps[y].is_none() {
                    let mut w = reps[x].clone().expect("visited").0;
                    w.push(a);
                    reps[y] = Some(Word(w));
                    queue.push_back(y);
                }
            }
        }
        let representatives = reps
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Malformed("monoid is not generated by its letters".into()))?;
        let m = Self {
            alphabet,
            size,
            table: flat,
            identity,
            generators,
            representatives,
            right,
        };
        m.verify()?;
        Ok(m)
    }

    /// Transition monoid of a complete DFA together with
    /// `{f : f(q₀) ∈ F}`. For the minimal DFA this is the syntactic monoid
    /// with `h_L(L)`.
    pub fn transition_monoid(d: &Dfa) -> Result<(Self, AcceptingSet)> {
        if !d.is_complete() || d.initial().is_none() {
            return Err(Error::NotComplete);
        }
        let n = d.num_states();
        let k = d.alphabet().len();
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut index: HashMap<Vec<u32>, Element> = HashMap::from([(identity.clone(), 0)]);
        let mut funcs = vec![identity];
        let mut representatives = vec![Word::empty()];
        let mut right = Vec::new();
        // parent[y] = (x, a) with y = x · a along the BFS tree
        let mut parent: Vec<Option<(Element, Letter)>> = vec![None];
        let mut i = 0;
        while i < funcs.len() {
            for a in 0..k {
                let next: Vec<u32> = funcs[i]
                    .iter()
                    .map(|&q| d.step(q as usize, a).expect("complete") as u32)
                    .collect();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = funcs.len();
                        if id >= MAX_MONOID_SIZE {
                            return Err(Error::TooLarge {
                                what: "transition monoid",
                                size: id + 1,
                                limit: MAX_MONOID_SIZE,
                            });
                        }
                        index.insert(next.clone(), id);
                        funcs.push(next);
                        let mut w = representatives[i].0.clone();
                        w.push(a);
                        representatives.push(Word(w));
                        parent.push(Some((i, a)));
                        id
                    }
                };
                right.push(id);
            }
            i += 1;
        }
        let size = funcs.len();
        let mut table = vec![0; size * size];
        for x in 0..size {
            table[x * size] = x;
            for y in 1..size {
                let (p, a) = parent[y].expect("non-identity has a parent");
                table[x * size + y] = right[table[x * size + p] * k + a];
            }
        }
        let generators = (0..k).map(|a| right[a]).collect();
        let q0 = d.initial().expect("complete");
        let accepting =
            AcceptingSet::new(funcs.iter().map(|f| d.is_final(f[q0] as usize)).collect());
        let m = Self {
            alphabet: d.alphabet().clone(),
            size,
            table,
            identity: 0,
            generators,
            representatives,
            right,
        };
        m.verify()?;
        Ok((m, accepting))
    }

    /// Identity law, representatives, and associativity. Associativity is
    /// checked as `(xy)a = x(ya)` for generators `a`; since every element
    /// is a product of generators, induction on word length extends it to
    /// all triples.
    fn verify(&self) -> Result<()> {
        for x in 0..self.size {
            if self.mul(x, self.identity) != x || self.mul(self.identity, x) != x {
                return Err(Error::Malformed(format!("identity law fails at {x}")));
            }
            if self.evaluate(self.representatives[x].letters()) != x {
                return Err(Error::Malformed(format!("representative of {x} is wrong")));
            }
        }
        for x in 0..self.size {
            for y in 0..self.size {
                let xy = self.mul(x, y);
                for &g in &self.generators {
                    if self.mul(xy, g) != self.mul(x, self.mul(y, g)) {
                        return Err(Error::Malformed(format!(
                            "associativity fails at ({x}, {y}, {g})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.table[x * self.size + y]
    }

    /// `x · h(a)`
    pub fn mul_letter(&self, x: Element, a: Letter) -> Element {
        self.right[x * self.alphabet.len() + a]
    }

    pub fn generator(&self, a: Letter) -> Element {
        self.generators[a]
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn representative(&self, x: Element) -> &Word {
        &self.representatives[x]
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn evaluate(&self, word: &[Letter]) -> Element {
        word.iter()
            .fold(self.identity, |x, &a| self.mul_letter(x, a))
    }

    pub fn is_idempotent(&self, x: Element) -> bool {
        self.mul(x, x) == x
    }

    pub fn power(&self, x: Element, k: usize) -> Element {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    /// The unique idempotent power of `x`: `x^k` for the smallest `k ≥ 1`
    /// with `x^k x^k = x^k`.
    pub fn omega(&self, x: Element) -> Element {
        let mut p = x;
        loop {
            if self.is_idempotent(p) {
                return p;
            }
            p = self.mul(p, x);
        }
    }

    pub fn omega_table(&self) -> Vec<Element> {
        self.elements().map(|x| self.omega(x)).collect()
    }

    /// Index and period of `x`: smallest `i ≥ 1, p ≥ 1` with `x^{i+p} = x^i`.
    pub fn index_and_period(&self, x: Element) -> (usize, usize) {
        let mut seen: HashMap<Element, usize> = HashMap::new();
        let mut p = x;
        let mut k = 1;
        loop {
            if let Some(&first) = seen.get(&p) {
                return (first, k - first);
            }
            seen.insert(p, k);
            p = self.mul(p, x);
            k += 1;
        }
    }

    /// Smallest `ω ≥ 1` such that `x^ω` is idempotent for every element.
    pub fn global_exponent(&self) -> usize {
        let (mut max_index, mut period) = (1, 1);
        for x in self.elements() {
            let (i, p) = self.index_and_period(x);
            max_index = max_index.max(i);
            period = lcm(period, p);
        }
        max_index.div_ceil(period) * period
    }

    pub fn green(&self) -> GreenStructure {
        GreenStructure::compute(self)
    }

    /// DFA over the right Cayley graph recognizing `h⁻¹(subset)`.
    pub fn preimage_dfa(&self, subset: &AcceptingSet) -> Dfa {
        let k = self.alphabet.len();
        let delta = self
            .elements()
            .map(|x| (0..k).map(|a| Some(self.mul_letter(x, a))).collect())
            .collect();
        Dfa::new(
            self.alphabet.clone(),
            delta,
            Some(self.identity),
            subset.flags().to_vec(),
        )
        .expect("cayley automaton is well-formed")
    }

    /// If `L(d)` is recognized by this monoid's homomorphism, returns its
    /// accepting subset. Decided exactly on the product of the Cayley
    /// automaton with `d`.
    pub fn recognized_subset(&self, d: &Dfa) -> Result<Option<AcceptingSet>> {
        if d.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let d = d.complete();
        let start = (self.identity, d.initial().expect("complete"));
        let mut verdict: Vec<Option<bool>> = vec![None; self.size];
        let mut seen = std::collections::HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some((x, q)) = queue.pop_front() {
            let f = d.is_final(q);
            match verdict[x] {
                Some(v) if v != f => return Ok(None),
                _ => verdict[x] = Some(f),
            }
            for a in self.alphabet.iter() {
                let next = (self.mul_letter(x, a), d.step(q, a).expect("complete"));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(Some(AcceptingSet::new(
            verdict.into_iter().map(|v| v.unwrap_or(false)).collect(),
        )))
    }

    /// Coarsest congruence saturating `p`; returns a class id per element.
    /// Two elements share a class iff no two-sided context separates them.
    pub fn syntactic_congruence(&self, p: &AcceptingSet) -> Vec<usize> {
        self.refine(p, true, true)
    }

    /// `x ~ y` iff `xw ∈ P ⟺ yw ∈ P` for all `w`.
    pub fn right_context_classes(&self, p: &AcceptingSet) -> Vec<usize> {
        self.refine(p, true, false)
    }

    /// `x ~ y` iff `wx ∈ P ⟺ wy ∈ P` for all `w`.
    pub fn left_context_classes(&self, p: &AcceptingSet) -> Vec<usize> {
        self.refine(p, false, true)
    }

    /// Moore-style refinement of `{P, M ∖ P}` under multiplication by the
    /// generators on the requested sides.
    fn refine(&self, p: &AcceptingSet, right: bool, left: bool) -> Vec<usize> {
        let mut class: Vec<usize> = self
            .elements()
            .map(|x| usize::from(p.contains(x)))
            .collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = Vec::with_capacity(self.size);
            for x in self.elements() {
                let mut sig = vec![class[x]];
                for &g in &self.generators {
                    if right {
                        sig.push(class[self.mul(x, g)]);
                    }
                    if left {
                        sig.push(class[self.mul(g, x)]);
                    }
                }
                let fresh = ids.len();
                next.push(*ids.entry(sig).or_insert(fresh));
            }
            class = next;
            if ids.len() == count {
                return class;
            }
            count = ids.len();
        }
    }

    /// `{p : p · x ∈ P}` for every `x`.
    pub fn left_contexts(&self, p: &AcceptingSet) -> Vec<BitSet> {
        self.elements()
            .map(|x| {
                let mut s = BitSet::new(self.size);
                for c in self.elements() {
                    if p.contains(self.mul(c, x)) {
                        s.insert(c);
                    }
                }
                s
            })
            .collect()
    }

    /// `{q : x · q ∈ P}` for every `x`.
    pub fn right_contexts(&self, p: &AcceptingSet) -> Vec<BitSet> {
        self.elements()
            .map(|x| {
                let mut s = BitSet::new(self.size);
                for c in self.elements() {
                    if p.contains(self.mul(x, c)) {
                        s.insert(c);
                    }
                }
                s
            })
            .collect()
    }

    pub fn dump(&self, accepting: &AcceptingSet) -> MonoidDump {
        let green = self.green();
        MonoidDump {
            size: self.size,
            identity: self.identity,
            table: self.table.clone(),
            generators: self
                .alphabet
                .iter()
                .map(|a| (self.alphabet.char_of(a).to_string(), self.generators[a]))
                .collect(),
            representatives: self
                .representatives
                .iter()
                .map(|w| self.alphabet.render(w.letters()))
                .collect(),
            accepting: accepting.iter().collect(),
            green: GreenDump {
                r: self
                    .elements()
                    .map(|x| green.class_of(GreenKind::R, x))
                    .collect(),
                l: self
                    .elements()
                    .map(|x| green.class_of(GreenKind::L, x))
                    .collect(),
                j: self
                    .elements()
                    .map(|x| green.class_of(GreenKind::J, x))
                    .collect(),
            },
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Serialized form of a monoid with its accepting set and Green classes.
#[derive(Debug, Clone, Serialize)]
pub struct MonoidDump {
    pub size: usize,
    pub identity: Element,
    pub table: Vec<Element>,
    pub generators: std::collections::BTreeMap<String, Element>,
    pub representatives: Vec<String>,
    pub accepting: Vec<Element>,
    pub green: GreenDump,
}

#[derive(Debug, Clone, Serialize)]
pub struct GreenDump {
    pub r: Vec<usize>,
    pub l: Vec<usize>,
    pub j: Vec<usize>,
}

/// `x^ω · x = x^ω` for all `x`.
pub fn is_aperiodic(m: &FiniteMonoid) -> bool {
    m.elements().all(|x| {
        let e = m.omega(x);
        m.mul(e, x) == e
    })
}

/// `(xy)^ω = (xy)^ω x (xy)^ω` for all `x, y`.
pub fn is_in_da(m: &FiniteMonoid) -> bool {
    let omega = m.omega_table();
    m.elements().all(|x| {
        m.elements().all(|y| {
            let e = omega[m.mul(x, y)];
            m.mul(m.mul(e, x), e) == e
        })
    })
}

/// `PM ⊆ P`, `MP ⊆ P` or `MPM ⊆ P`. Closure under multiplication by the
/// generators is equivalent since they generate `M`.
pub fn is_ideal_subset(m: &FiniteMonoid, p: &AcceptingSet, kind: IdealKind) -> bool {
    ideal_violation(m, p, kind).is_none()
}

/// A pair `(x, s)` with `x ∈ P` and `x·s ∉ P` (right) or `s·x ∉ P` (left),
/// where `s` is a generator.
pub fn ideal_violation(
    m: &FiniteMonoid,
    p: &AcceptingSet,
    kind: IdealKind,
) -> Option<(Element, Element, IdealKind)> {
    let right = matches!(kind, IdealKind::Right | IdealKind::TwoSided);
    let left = matches!(kind, IdealKind::Left | IdealKind::TwoSided);
    for x in p.iter() {
        for &g in m.generators() {
            if right && !p.contains(m.mul(x, g)) {
                return Some((x, g, IdealKind::Right));
            }
            if left && !p.contains(m.mul(g, x)) {
                return Some((x, g, IdealKind::Left));
            }
        }
    }
    None
}

/// Whether `p` is a union of whole R-, L- or J-classes.
pub fn is_union_of_classes(m: &FiniteMonoid, p: &AcceptingSet, kind: GreenKind) -> bool {
    class_violation(&m.green(), p, kind).is_none()
}

/// Two elements of the same class, the first inside `p`, the second outside.
pub fn class_violation(
    g: &GreenStructure,
    p: &AcceptingSet,
    kind: GreenKind,
) -> Option<(Element, Element)> {
    for class in g.classes(kind) {
        let inside = class.iter().find(|&&x| p.contains(x));
        let outside = class.iter().find(|&&x| !p.contains(x));
        if let (Some(&i), Some(&o)) = (inside, outside) {
            return Some((i, o));
        }
    }
    None
}

/// Syntactic monoid and `h_L(L)` of the language of `d`.
pub fn syntactic_monoid(d: &Dfa) -> Result<(FiniteMonoid, AcceptingSet)> {
    FiniteMonoid::transition_monoid(&d.minimize())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::automata::{parse_regex, to_minimal_dfa};

    pub(crate) fn cyclic_group(order: usize) -> FiniteMonoid {
        let a = Alphabet::from_letters("x").unwrap();
        let table = (0..order)
            .map(|i| (0..order).map(|j| (i + j) % order).collect())
            .collect();
        FiniteMonoid::from_table(a, table, 0, vec![1 % order]).unwrap()
    }

    fn synt(re: &str, letters: &str) -> (FiniteMonoid, AcceptingSet) {
        let al = Alphabet::from_letters(letters).unwrap();
        syntactic_monoid(&to_minimal_dfa(&parse_regex(re, &al).unwrap())).unwrap()
    }

    #[test]
    fn trivial_monoid_of_full_language() {
        let (m, p) = synt("(a|b)*", "ab");
        assert_eq!(m.size(), 1);
        assert_eq!(p.iter().collect::<Vec<_>>(), [m.identity()]);
        assert!(is_aperiodic(&m) && is_in_da(&m));
    }

    #[test]
    fn even_length_gives_two_element_group() {
        let (m, p) = synt("(aa)*", "a");
        assert_eq!(m.size(), 2);
        assert_eq!(p.len(), 1);
        assert!(!is_aperiodic(&m));
        let g = m.green();
        assert_eq!(g.classes(GreenKind::R).len(), 1);
    }

    #[test]
    fn omega_powers() {
        let c3 = cyclic_group(3);
        assert_eq!(c3.omega(1), 0);
        assert_eq!(c3.omega(0), 0);
        assert_eq!(c3.global_exponent(), 3);
        // b*a: the letter b is idempotent, 'aa...' hits a zero
        let (m, _) = synt("b*a", "ab");
        for x in m.elements() {
            assert!(m.is_idempotent(m.omega(x)));
            if m.is_idempotent(x) {
                assert_eq!(m.omega(x), x);
            }
        }
        let zero = m.evaluate(&[0, 0]);
        assert!(m
            .elements()
            .all(|x| m.mul(zero, x) == zero && m.mul(x, zero) == zero));
        assert_eq!(m.omega(zero), zero);
    }

    #[test]
    fn global_exponent_makes_every_power_idempotent() {
        let (m, _) = synt("(a|b)*a(a|b)(a|b)|(aaa)*b", "ab");
        let w = m.global_exponent();
        for x in m.elements() {
            assert!(m.is_idempotent(m.power(x, w)));
            assert_eq!(m.power(x, w), m.omega(x));
        }
    }

    #[test]
    fn from_table_rejects_non_associative() {
        let a = Alphabet::from_letters("x").unwrap();
        // (x·x)·x = 2·x = 1 but x·(x·x) = x·2 = 2
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 1, 2]];
        assert!(FiniteMonoid::from_table(a.clone(), table, 0, vec![1]).is_err());
        let not_generated = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteMonoid::from_table(a, not_generated, 0, vec![0]).is_err());
    }

    #[test]
    fn right_ideal_fixture() {
        let (m, p) = synt("ab(a|b)*", "ab");
        assert!(is_ideal_subset(&m, &p, IdealKind::Right));
        assert!(!is_ideal_subset(&m, &p, IdealKind::Left));
        assert!(is_aperiodic(&m));
        // L b⁻¹ = abA* ∪ {a}
        let (m2, p2) = synt("ab(a|b)*|a", "ab");
        let (x, s, _) = ideal_violation(&m2, &p2, IdealKind::Right).unwrap();
        assert!(p2.contains(x) && !p2.contains(m2.mul(x, s)));
    }

    #[test]
    fn empty_and_full_subsets_are_ideals_and_unions() {
        let (m, _) = synt("ab(a|b)*|ba", "ab");
        let none = AcceptingSet::from_elements(m.size(), []);
        let all = AcceptingSet::from_elements(m.size(), m.elements());
        for kind in [IdealKind::Right, IdealKind::Left, IdealKind::TwoSided] {
            assert!(is_ideal_subset(&m, &none, kind) && is_ideal_subset(&m, &all, kind));
        }
        for kind in [GreenKind::R, GreenKind::L, GreenKind::J] {
            assert!(is_union_of_classes(&m, &all, kind));
        }
    }

    #[test]
    fn recognized_subset_detects_foreign_languages() {
        let al = Alphabet::from_letters("ab").unwrap();
        let (m, p) = synt("ab(a|b)*", "ab");
        let same = to_minimal_dfa(&parse_regex("ab(a|b)*", &al).unwrap());
        assert_eq!(m.recognized_subset(&same).unwrap(), Some(p));
        let other = to_minimal_dfa(&parse_regex("(a|b)*aa", &al).unwrap());
        assert_eq!(m.recognized_subset(&other).unwrap(), None);
    }
}
