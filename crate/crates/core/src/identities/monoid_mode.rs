//! Exact identity checking over a finite monoid.
//!
//! Each `<=>` is split into two implications `lhs ∈ P ⟹ rhs ∈ P`, each
//! quantified over all assignments. Naive enumeration is `|M|^k`, which is
//! hopeless for five variables, so before enumerating we simplify:
//!
//! 1. A variable occurring once, as the outer factor of a side, is folded
//!    into that side's target set: `∃x. x·A ∈ S` on the left-hand side,
//!    `∀x. x·B ∈ S` on the right-hand side.
//! 2. A variable that is the outer factor of both sides and occurs nowhere
//!    else becomes a context: the check compares the sets of left (right,
//!    two-sided) contexts of the two core values.
//! 3. Otherwise, a variable `z` occurring once on each side at top level,
//!    with disjoint variables before and after it, splits the check into
//!    prefix and suffix assignments.
//!
//! Core values are deduplicated by the context classes that determine the
//! outcome, so the expensive comparisons run once per class pair.
//! Counterexamples are the first found in this staged order, with
//! assignments enumerated lexicographically over element ids within each
//! stage.

use std::collections::{BTreeMap, HashMap};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::identities::{
    sides_in, Counterexample, IdentityMode, IdentityOutcome, LatticeIdentity, OmegaTerm,
};
use crate::monoid::{AcceptingSet, Element, FiniteMonoid};

/// Default bound on enumerated assignments and pairwise comparisons.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Element per variable slot; slots index the identity's sorted variables.
type Assignment = Vec<Element>;

/// Exact check of `id` against `P ⊆ M`.
pub fn check_in_monoid(
    m: &FiniteMonoid,
    p: &AcceptingSet,
    id: &LatticeIdentity,
    budget: u64,
) -> Result<IdentityOutcome> {
    let mut budget = Budget(budget);
    let vars: Vec<char> = id.vars().into_iter().collect();
    let omega = m.omega_table();
    let mut checks = Vec::new();
    if id.mode == IdentityMode::Iff {
        let mut both = Implication::new(m, &omega, &vars, p, &id.lhs, &id.rhs);
        both.iff = true;
        both.fold_outer_variables();
        // folding is one-sided, after which the directions differ
        if both.closures_l.is_empty() && both.closures_r.is_empty() {
            checks.push(both);
        }
    }
    if checks.is_empty() {
        for (lhs, rhs) in id.implications() {
            checks.push(Implication::new(m, &omega, &vars, p, &lhs, &rhs));
        }
    }
    for mut checker in checks {
        if let Some(values) = checker.run(&mut budget)? {
            let sigma: BTreeMap<char, Element> = vars.iter().copied().zip(values).collect();
            let (lhs_member, rhs_member) = sides_in(m, p, id, &sigma)?;
            let assignment = sigma
                .iter()
                .map(|(&v, &e)| (v, m.representative(e).clone()))
                .collect();
            return Ok(IdentityOutcome {
                holds: false,
                counterexample: Some(Counterexample {
                    assignment,
                    elements: Some(sigma),
                    n: None,
                    lhs_member,
                    rhs_member,
                }),
            });
        }
    }
    Ok(IdentityOutcome {
        holds: true,
        counterexample: None,
    })
}

struct Budget(u64);

impl Budget {
    fn charge(&mut self, amount: u64) -> Result<()> {
        if amount > self.0 {
            return Err(Error::TooLarge {
                what: "identity search",
                size: usize::try_from(amount).unwrap_or(usize::MAX),
                limit: usize::try_from(self.0).unwrap_or(usize::MAX),
            });
        }
        self.0 -= amount;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Front,
    Back,
}

/// Fold of one outer variable into a target set.
struct Closure {
    var: char,
    end: End,
    /// the set before folding
    inner: AcceptingSet,
}

struct Implication<'a> {
    m: &'a FiniteMonoid,
    omega: &'a [Element],
    vars: &'a [char],
    lhs: Vec<OmegaTerm>,
    rhs: Vec<OmegaTerm>,
    /// `lhs ∈ target_l ⟹ rhs ∈ target_r`
    target_l: AcceptingSet,
    target_r: AcceptingSet,
    closures_l: Vec<Closure>,
    closures_r: Vec<Closure>,
    /// check `lhs ∈ target_l ⟺ rhs ∈ target_r` in one pass
    iff: bool,
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Push(usize),
    Mul,
    Omega,
}

/// A product of factors compiled to a stack program over variable slots.
struct Program {
    ops: Vec<Op>,
    slots: Vec<usize>,
    depth: usize,
}

impl Program {
    fn new(fs: &[OmegaTerm], vars: &[char]) -> Self {
        fn emit(t: &OmegaTerm, vars: &[char], ops: &mut Vec<Op>) {
            match t {
                OmegaTerm::Var(v) => ops.push(Op::Push(
                    vars.iter().position(|w| w == v).expect("known variable"),
                )),
                OmegaTerm::Concat(ts) => {
                    emit(&ts[0], vars, ops);
                    for t in &ts[1..] {
                        emit(t, vars, ops);
                        ops.push(Op::Mul);
                    }
                }
                OmegaTerm::Omega(t) => {
                    emit(t, vars, ops);
                    ops.push(Op::Omega);
                }
            }
        }
        let mut ops = Vec::new();
        for (i, t) in fs.iter().enumerate() {
            emit(t, vars, &mut ops);
            if i > 0 {
                ops.push(Op::Mul);
            }
        }
        let mut slots: Vec<usize> = ops
            .iter()
            .filter_map(|op| match op {
                Op::Push(s) => Some(*s),
                _ => None,
            })
            .collect();
        slots.sort_unstable();
        slots.dedup();
        let (mut depth, mut top) = (0, 0usize);
        for op in &ops {
            match op {
                Op::Push(_) => top += 1,
                Op::Mul => top -= 1,
                Op::Omega => {}
            }
            depth = depth.max(top);
        }
        Self { ops, slots, depth }
    }

    fn eval(&self, m: &FiniteMonoid, omega: &[Element], values: &[Element]) -> Element {
        if self.ops.is_empty() {
            return m.identity();
        }
        let mut small = [0; 16];
        let mut large = Vec::new();
        let stack: &mut [Element] = if self.depth <= small.len() {
            &mut small
        } else {
            large.resize(self.depth, 0);
            &mut large
        };
        let mut top = 0;
        for op in &self.ops {
            match *op {
                Op::Push(s) => {
                    stack[top] = values[s];
                    top += 1;
                }
                Op::Mul => {
                    top -= 1;
                    stack[top - 1] = m.mul(stack[top - 1], stack[top]);
                }
                Op::Omega => stack[top - 1] = omega[stack[top - 1]],
            }
        }
        stack[0]
    }
}

fn vars_of(fs: &[OmegaTerm]) -> Vec<char> {
    let mut v: Vec<char> = fs.iter().flat_map(|t| t.vars()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn slot(vars: &[char], v: char) -> usize {
    vars.iter().position(|&w| w == v).expect("known variable")
}

fn outer_var(fs: &[OmegaTerm], end: End) -> Option<char> {
    let t = match end {
        End::Front => fs.first()?,
        End::Back => fs.last()?,
    };
    match t {
        OmegaTerm::Var(v) => Some(*v),
        _ => None,
    }
}

fn remove_outer(fs: &mut Vec<OmegaTerm>, end: End) {
    match end {
        End::Front => {
            fs.remove(0);
        }
        End::Back => {
            fs.pop();
        }
    }
}

/// Calls `f` on every assignment of the given slots (other slots of
/// `values` are left alone), lexicographically over element ids with the
/// first slot most significant. Stops at the first `true`.
fn for_each_assignment<F>(
    m: &FiniteMonoid,
    slots: &[usize],
    values: &mut [Element],
    budget: &mut Budget,
    mut f: F,
) -> Result<bool>
where
    F: FnMut(&[Element]) -> Result<bool>,
{
    let total = (m.size() as u64)
        .checked_pow(slots.len() as u32)
        .unwrap_or(u64::MAX);
    budget.charge(total)?;
    for &s in slots {
        values[s] = 0;
    }
    loop {
        if f(values)? {
            return Ok(true);
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            values[slots[i]] += 1;
            if values[slots[i]] < m.size() {
                break;
            }
            values[slots[i]] = 0;
        }
    }
}

impl<'a> Implication<'a> {
    fn new(
        m: &'a FiniteMonoid,
        omega: &'a [Element],
        vars: &'a [char],
        p: &AcceptingSet,
        lhs: &OmegaTerm,
        rhs: &OmegaTerm,
    ) -> Self {
        Self {
            m,
            omega,
            vars,
            lhs: lhs.factors(),
            rhs: rhs.factors(),
            target_l: p.clone(),
            target_r: p.clone(),
            closures_l: Vec::new(),
            closures_r: Vec::new(),
            iff: false,
        }
    }

    fn bad(&self, lhs_in: bool, rhs_in: bool) -> bool {
        if self.iff {
            lhs_in != rhs_in
        } else {
            lhs_in && !rhs_in
        }
    }

    fn occurrences(&self, v: char) -> usize {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .map(|t| t.occurrences(v))
            .sum()
    }

    /// `{m : ∃x. xm ∈ S}` (front) or `{m : ∃x. mx ∈ S}` (back), and the
    /// universal variants.
    fn fold(&self, s: &AcceptingSet, end: End, exists: bool) -> AcceptingSet {
        let m = self.m;
        AcceptingSet::new(
            m.elements()
                .map(|e| {
                    let mut hits = m.elements().map(|x| match end {
                        End::Front => s.contains(m.mul(x, e)),
                        End::Back => s.contains(m.mul(e, x)),
                    });
                    if exists {
                        hits.any(|b| b)
                    } else {
                        hits.all(|b| b)
                    }
                })
                .collect(),
        )
    }

    fn fold_outer_variables(&mut self) {
        loop {
            let mut changed = false;
            for left_side in [true, false] {
                for end in [End::Front, End::Back] {
                    let side = if left_side { &self.lhs } else { &self.rhs };
                    if side.len() < 2 {
                        continue;
                    }
                    let Some(v) = outer_var(side, end) else {
                        continue;
                    };
                    if self.occurrences(v) != 1 {
                        continue;
                    }
                    if left_side {
                        remove_outer(&mut self.lhs, end);
                        let next = self.fold(&self.target_l, end, true);
                        let inner = std::mem::replace(&mut self.target_l, next);
                        self.closures_l.push(Closure { var: v, end, inner });
                    } else {
                        remove_outer(&mut self.rhs, end);
                        let next = self.fold(&self.target_r, end, false);
                        let inner = std::mem::replace(&mut self.target_r, next);
                        self.closures_r.push(Closure { var: v, end, inner });
                    }
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn shared_peel(&mut self, end: End) -> Option<char> {
        let v = outer_var(&self.lhs, end)?;
        if outer_var(&self.rhs, end) != Some(v) || self.occurrences(v) != 2 {
            return None;
        }
        remove_outer(&mut self.lhs, end);
        remove_outer(&mut self.rhs, end);
        Some(v)
    }

    /// Returns a falsifying assignment, if any.
    fn run(&mut self, budget: &mut Budget) -> Result<Option<Assignment>> {
        self.fold_outer_variables();
        let front = self.shared_peel(End::Front);
        let back = self.shared_peel(End::Back);
        let core = if front.is_none() && back.is_none() {
            match self.split_variable() {
                Some(split) => self.check_split(split, budget)?,
                None => self.check_plain(budget)?,
            }
        } else {
            self.check_contexts(front, back, budget)?
        };
        Ok(core.map(|(sigma, a, b)| self.unwind(sigma, a, b)))
    }

    /// Fills in the folded variables so that `lhs ∈ P` and `rhs ∉ P`, given
    /// core values `a ∈ target_l` and `b ∉ target_r`.
    fn unwind(&self, mut sigma: Assignment, mut a: Element, mut b: Element) -> Assignment {
        let m = self.m;
        let apply = |x: Element, e: Element, end: End| match end {
            End::Front => m.mul(x, e),
            End::Back => m.mul(e, x),
        };
        for c in self.closures_l.iter().rev() {
            let x = m
                .elements()
                .find(|&x| c.inner.contains(apply(x, a, c.end)))
                .expect("existential fold has a witness");
            a = apply(x, a, c.end);
            sigma[slot(self.vars, c.var)] = x;
        }
        for c in self.closures_r.iter().rev() {
            let x = m
                .elements()
                .find(|&x| !c.inner.contains(apply(x, b, c.end)))
                .expect("universal fold has a witness");
            b = apply(x, b, c.end);
            sigma[slot(self.vars, c.var)] = x;
        }
        sigma
    }

    fn check_plain(&self, budget: &mut Budget) -> Result<Option<(Assignment, Element, Element)>> {
        let (pl, pr) = (
            Program::new(&self.lhs, self.vars),
            Program::new(&self.rhs, self.vars),
        );
        let slots: Vec<usize> = vars_of(&[self.lhs.clone(), self.rhs.clone()].concat())
            .into_iter()
            .map(|v| slot(self.vars, v))
            .collect();
        let mut values = vec![0; self.vars.len()];
        let mut found = None;
        for_each_assignment(self.m, &slots, &mut values, budget, |sigma| {
            let a = pl.eval(self.m, self.omega, sigma);
            let b = pr.eval(self.m, self.omega, sigma);
            if self.bad(self.target_l.contains(a), self.target_r.contains(b)) {
                found = Some((sigma.to_vec(), a, b));
                return Ok(true);
            }
            Ok(false)
        })?;
        Ok(found)
    }

    /// Core values deduplicated by the class keys that determine the check.
    /// Left-hand factors are evaluated once per assignment of their own
    /// variables, ahead of the remaining ones.
    fn distinct_pairs(
        &self,
        lhs: &[OmegaTerm],
        rhs: &[OmegaTerm],
        key_l: &[usize],
        key_r: &[usize],
        budget: &mut Budget,
    ) -> Result<Vec<(Assignment, Element, Element)>> {
        let (pl, pr) = (Program::new(lhs, self.vars), Program::new(rhs, self.vars));
        let mut slots = pl.slots.clone();
        slots.extend(pr.slots.iter().filter(|s| !pl.slots.contains(s)));
        let mut values = vec![0; self.vars.len()];
        let width = key_r.iter().max().map_or(0, |k| k + 1);
        let height = key_l.iter().max().map_or(0, |k| k + 1);
        let mut seen = vec![false; width * height];
        let mut out = Vec::new();
        for_each_assignment(self.m, &slots, &mut values, budget, |sigma| {
            let a = pl.eval(self.m, self.omega, sigma);
            let b = pr.eval(self.m, self.omega, sigma);
            let cell = &mut seen[key_l[a] * width + key_r[b]];
            if !*cell {
                *cell = true;
                out.push((sigma.to_vec(), a, b));
            }
            Ok(false)
        })?;
        Ok(out)
    }

    fn check_contexts(
        &self,
        front: Option<char>,
        back: Option<char>,
        budget: &mut Budget,
    ) -> Result<Option<(Assignment, Element, Element)>> {
        let m = self.m;
        let (tl, tr) = (&self.target_l, &self.target_r);
        let classes = |s: &AcceptingSet| match (front, back) {
            (Some(_), None) => m.left_context_classes(s),
            (None, Some(_)) => m.right_context_classes(s),
            _ => m.syntactic_congruence(s),
        };
        let (key_l, key_r) = (classes(tl), classes(tr));
        // equal context sets iff equal classes
        let relation = match (front, back) {
            _ if self.iff => None,
            (Some(_), Some(_)) => {
                budget.charge(m.size() as u64 * m.size() as u64 * m.generators().len() as u64)?;
                Some(context_inclusion(m, tl, tr))
            }
            _ => None,
        };
        let context = |s: &AcceptingSet, e: Element| -> BitSet {
            let mut set = BitSet::new(m.size());
            for x in m.elements() {
                let hit = match front {
                    Some(_) => s.contains(m.mul(x, e)),
                    None => s.contains(m.mul(e, x)),
                };
                if hit {
                    set.insert(x);
                }
            }
            set
        };
        let mut cache_l: HashMap<Element, BitSet> = HashMap::new();
        let mut cache_r: HashMap<Element, BitSet> = HashMap::new();
        let iff = self.iff;
        let violated = |a: Element, b: Element| match &relation {
            _ if iff => key_l[a] != key_r[b],
            Some(rel) => !rel[a * m.size() + b],
            None => {
                let ca = cache_l.entry(a).or_insert_with(|| context(tl, a));
                let cb = cache_r.entry(b).or_insert_with(|| context(tr, b));
                !ca.is_subset(cb)
            }
        };
        let Some((mut sigma, a, b)) =
            self.first_violation(&self.lhs, &self.rhs, &key_l, &key_r, budget, violated)?
        else {
            return Ok(None);
        };
        // a separating context, found by one sweep
        let wrap = |x: Element, e: Element, y: Element| m.mul(m.mul(x, e), y);
        let (x, y) = m
            .elements()
            .flat_map(|x| m.elements().map(move |y| (x, y)))
            .map(|(x, y)| match (front, back) {
                (Some(_), Some(_)) => (x, y),
                (Some(_), None) => (x, m.identity()),
                _ => (m.identity(), y),
            })
            .find(|&(x, y)| self.bad(tl.contains(wrap(x, a, y)), tr.contains(wrap(x, b, y))))
            .expect("violated inclusion has a separating context");
        if let Some(v) = front {
            sigma[slot(self.vars, v)] = x;
        }
        if let Some(v) = back {
            sigma[slot(self.vars, v)] = y;
        }
        Ok(Some((sigma, wrap(x, a, y), wrap(x, b, y))))
    }

    /// First assignment whose core values `(a, b)` satisfy `violated`,
    /// testing each pair of class keys once.
    fn first_violation<F>(
        &self,
        lhs: &[OmegaTerm],
        rhs: &[OmegaTerm],
        key_l: &[usize],
        key_r: &[usize],
        budget: &mut Budget,
        mut violated: F,
    ) -> Result<Option<(Assignment, Element, Element)>>
    where
        F: FnMut(Element, Element) -> bool,
    {
        let (pl, pr) = (Program::new(lhs, self.vars), Program::new(rhs, self.vars));
        let mut slots = pl.slots.clone();
        slots.extend(pr.slots.iter().filter(|s| !pl.slots.contains(s)));
        let width = key_r.iter().max().map_or(0, |k| k + 1);
        let height = key_l.iter().max().map_or(0, |k| k + 1);
        let mut seen = vec![false; width * height];
        let mut values = vec![0; self.vars.len()];
        let mut found = None;
        for_each_assignment(self.m, &slots, &mut values, budget, |sigma| {
            let a = pl.eval(self.m, self.omega, sigma);
            let b = pr.eval(self.m, self.omega, sigma);
            let cell = &mut seen[key_l[a] * width + key_r[b]];
            if *cell {
                return Ok(false);
            }
            *cell = true;
            if violated(a, b) {
                found = Some((sigma.to_vec(), a, b));
                return Ok(true);
            }
            Ok(false)
        })?;
        Ok(found)
    }

    /// A variable occurring once on each side as a top-level factor, with
    /// the variables before it disjoint from those after it.
    fn split_variable(&self) -> Option<(char, usize, usize)> {
        let mut candidates: Vec<char> = vars_of(&self.lhs);
        candidates.retain(|&v| self.occurrences(v) == 2);
        for v in candidates {
            let pos = |fs: &[OmegaTerm]| fs.iter().position(|t| *t == OmegaTerm::Var(v));
            let (Some(i), Some(j)) = (pos(&self.lhs), pos(&self.rhs)) else {
                continue;
            };
            let before = vars_of(&[&self.lhs[..i], &self.rhs[..j]].concat());
            let after = vars_of(&[&self.lhs[i + 1..], &self.rhs[j + 1..]].concat());
            if before.iter().all(|c| !after.contains(c)) {
                return Some((v, i, j));
            }
        }
        None
    }

    fn check_split(
        &self,
        (z, i, j): (char, usize, usize),
        budget: &mut Budget,
    ) -> Result<Option<(Assignment, Element, Element)>> {
        let m = self.m;
        let (tl, tr) = (&self.target_l, &self.target_r);
        // `u z v ∈ S` depends on u via its right contexts and on v via its
        // left contexts
        let prefixes = self.distinct_pairs(
            &self.lhs[..i],
            &self.rhs[..j],
            &m.right_context_classes(tl),
            &m.right_context_classes(tr),
            budget,
        )?;
        let suffixes = self.distinct_pairs(
            &self.lhs[i + 1..],
            &self.rhs[j + 1..],
            &m.left_context_classes(tl),
            &m.left_context_classes(tr),
            budget,
        )?;
        budget.charge((prefixes.len() * suffixes.len()) as u64 * m.size() as u64)?;
        for (s1, ul, ur) in &prefixes {
            for (s2, vl, vr) in &suffixes {
                for e in m.elements() {
                    let a = m.mul(m.mul(*ul, e), *vl);
                    let b = m.mul(m.mul(*ur, e), *vr);
                    if self.bad(tl.contains(a), tr.contains(b)) {
                        // the two halves bind disjoint slots
                        let mut sigma = s2.clone();
                        let before = vars_of(&[&self.lhs[..i], &self.rhs[..j]].concat());
                        for v in before {
                            sigma[slot(self.vars, v)] = s1[slot(self.vars, v)];
                        }
                        sigma[slot(self.vars, z)] = e;
                        return Ok(Some((sigma, a, b)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// `rel[a·|M| + b]` iff every two-sided context taking `a` into `sl` takes
/// `b` into `sr`. Greatest fixpoint: start from all pairs and discard those
/// with `a ∈ sl, b ∉ sr` together with everything that reaches a discarded
/// pair by multiplying both components by the same generator.
fn context_inclusion(m: &FiniteMonoid, sl: &AcceptingSet, sr: &AcceptingSet) -> Vec<bool> {
    let n = m.size();
    let gens = m.generators();
    // for each generator and side, the x with g·x = y (resp. x·g = y),
    // grouped by y
    let preds: Vec<(Vec<usize>, Vec<Element>)> = gens
        .iter()
        .flat_map(|&g| [true, false].map(|left| (g, left)))
        .map(|(g, left)| {
            let image = |x: Element| if left { m.mul(g, x) } else { m.mul(x, g) };
            let mut start = vec![0; n + 1];
            for x in m.elements() {
                start[image(x) + 1] += 1;
            }
            for y in 0..n {
                start[y + 1] += start[y];
            }
            let mut fill = start.clone();
            let mut items = vec![0; n];
            for x in m.elements() {
                let y = image(x);
                items[fill[y]] = x;
                fill[y] += 1;
            }
            (start, items)
        })
        .collect();
    let mut rel = vec![true; n * n];
    let mut stack = Vec::new();
    for a in m.elements() {
        for b in m.elements() {
            if sl.contains(a) && !sr.contains(b) {
                rel[a * n + b] = false;
                stack.push((a, b));
            }
        }
    }
    while let Some((a, b)) = stack.pop() {
        for (start, items) in &preds {
            {
                for &a2 in &items[start[a]..start[a + 1]] {
                    for &b2 in &items[start[b]..start[b + 1]] {
                        if rel[a2 * n + b2] {
                            rel[a2 * n + b2] = false;
                            stack.push((a2, b2));
                        }
                    }
                }
            }
        }
    }
    rel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{parse_regex, to_minimal_dfa};
    use crate::monoid::{
        is_ideal_subset, is_in_da, is_union_of_classes, syntactic_monoid, GreenKind, IdealKind,
    };

    fn data(re: &str, letters: &str) -> (FiniteMonoid, AcceptingSet) {
        let al = Alphabet::from_letters(letters).unwrap();
        syntactic_monoid(&to_minimal_dfa(&parse_regex(re, &al).unwrap())).unwrap()
    }

    /// Plain enumeration of every assignment, no simplification.
    fn naive(m: &FiniteMonoid, p: &AcceptingSet, id: &LatticeIdentity) -> bool {
        let vars: Vec<char> = id.vars().into_iter().collect();
        let slots: Vec<usize> = (0..vars.len()).collect();
        let mut values = vec![0; vars.len()];
        let mut budget = Budget(u64::MAX);
        !for_each_assignment(m, &slots, &mut values, &mut budget, |values| {
            let sigma = vars.iter().copied().zip(values.iter().copied()).collect();
            let (l, r) = sides_in(m, p, id, &sigma)?;
            Ok(match id.mode {
                crate::identities::IdentityMode::Implies => l && !r,
                crate::identities::IdentityMode::Iff => l != r,
            })
        })
        .unwrap()
    }

    const FIXTURES: &[(&str, &str)] = &[
        ("ab(a|b)*", "ab"),
        ("ab(a|b)*|a", "ab"),
        ("b*a", "ab"),
        ("(aa)*", "a"),
        ("(a|b|c)*ab(b|c)*", "abc"),
        ("(a|c)*ab(a|b|c)*", "abc"),
        ("(a|b|c)*ab(a|b|c)*", "abc"),
        ("(a|b)*a", "ab"),
        ("a(a|b)*b", "ab"),
        ("%e|a|ab", "ab"),
        ("(ab)*", "ab"),
    ];

    #[test]
    fn agrees_with_plain_enumeration() {
        for &(re, letters) in FIXTURES {
            let (m, p) = data(re, letters);
            for (name, _) in crate::identities::CATALOG {
                let id = LatticeIdentity::named(name).unwrap();
                let vars = id.vars().len() as u32;
                if (m.size() as u64).pow(vars) > 3_000_000 {
                    continue;
                }
                let fast = check_in_monoid(&m, &p, &id, DEFAULT_BUDGET).unwrap();
                assert_eq!(fast.holds, naive(&m, &p, &id), "{re} {name}");
                if let Some(c) = fast.counterexample {
                    // the reported assignment really falsifies the identity
                    let ok = match id.mode {
                        crate::identities::IdentityMode::Implies => c.lhs_member && !c.rhs_member,
                        crate::identities::IdentityMode::Iff => c.lhs_member != c.rhs_member,
                    };
                    assert!(ok, "{re} {name}");
                    assert_eq!(c.assignment.len(), id.vars().len());
                }
            }
        }
    }

    #[test]
    fn agrees_with_direct_monoid_checks() {
        for &(re, letters) in FIXTURES {
            let (m, p) = data(re, letters);
            let holds = |name: &str| {
                check_in_monoid(
                    &m,
                    &p,
                    &LatticeIdentity::named(name).unwrap(),
                    DEFAULT_BUDGET,
                )
                .unwrap()
                .holds
            };
            assert_eq!(
                holds("right-ideal"),
                is_ideal_subset(&m, &p, IdealKind::Right),
                "{re}"
            );
            assert_eq!(
                holds("left-ideal"),
                is_ideal_subset(&m, &p, IdealKind::Left),
                "{re}"
            );
            assert_eq!(
                holds("two-sided-ideal"),
                is_ideal_subset(&m, &p, IdealKind::TwoSided),
                "{re}"
            );
            assert_eq!(
                holds("bc-right"),
                is_union_of_classes(&m, &p, GreenKind::R),
                "{re}"
            );
            assert_eq!(
                holds("bc-left"),
                is_union_of_classes(&m, &p, GreenKind::L),
                "{re}"
            );
            assert_eq!(
                holds("bc-two-sided"),
                is_union_of_classes(&m, &p, GreenKind::J),
                "{re}"
            );
            assert_eq!(holds("da"), is_in_da(&m), "{re}");
            assert_eq!(holds("aperiodic"), crate::monoid::is_aperiodic(&m), "{re}");
        }
    }

    #[test]
    fn fixture_verdicts() {
        let (m, p) = data("ab(a|b)*", "ab");
        let id = LatticeIdentity::named("right-ideal").unwrap();
        assert!(check_in_monoid(&m, &p, &id, DEFAULT_BUDGET).unwrap().holds);
        let (m, p) = data("(a|b|c)*ab(b|c)*", "abc");
        let id = LatticeIdentity::named("bc-right").unwrap();
        let out = check_in_monoid(&m, &p, &id, DEFAULT_BUDGET).unwrap();
        assert!(!out.holds);
        let c = out.counterexample.unwrap();
        assert_ne!(c.lhs_member, c.rhs_member);
        let (m, p) = data("(a|b)*", "ab");
        for (name, _) in crate::identities::CATALOG {
            let id = LatticeIdentity::named(name).unwrap();
            assert!(
                check_in_monoid(&m, &p, &id, DEFAULT_BUDGET).unwrap().holds,
                "{name}"
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (m, p) = data("(a|b|c)*ab(b|c)*", "abc");
        let id = LatticeIdentity::parse("xyzst => tszyx").unwrap();
        assert!(matches!(
            check_in_monoid(&m, &p, &id, 1000),
            Err(Error::TooLarge { .. })
        ));
    }
}
