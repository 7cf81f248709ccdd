use crate::automata::Components;
use crate::bitset::BitSet;
use crate::monoid::{Element, FiniteMonoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreenKind {
    R,
    L,
    J,
}

/// Green's R, L and J classes with their preorders.
///
/// `x ≤_R y` iff `x ∈ yM`, i.e. `x` is reachable from `y` in the right Cayley
/// graph; R-classes are its strongly connected components. L and J use the
/// left Cayley graph and the union of both graphs. Class ids are ordered by
/// the smallest element they contain.
#[derive(Debug, Clone)]
pub struct GreenStructure {
    r: Relation,
    l: Relation,
    j: Relation,
}

#[derive(Debug, Clone)]
struct Relation {
    class_of: Vec<usize>,
    classes: Vec<Vec<Element>>,
    /// `below[c]`: classes `d` with `d ≤ c` (reflexive)
    below: Vec<BitSet>,
}

impl Relation {
    fn from_graph<F>(size: usize, succ: F) -> Self
    where
        F: FnMut(usize) -> Vec<usize>,
    {
        let comps = Components::compute(size, succ);
        // renumber components by their smallest element
        let mut order: Vec<usize> = (0..comps.len()).collect();
        order.sort_by_key(|&c| comps.members(c)[0]);
        let mut rank = vec![0; comps.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let reach = comps.reachability();
        let classes = order.iter().map(|&c| comps.members(c).to_vec()).collect();
        let below = order
            .iter()
            .map(|&c| {
                let mut s = BitSet::new(comps.len());
                for d in reach[c].iter() {
                    s.insert(rank[d]);
                }
                s
            })
            .collect();
        let class_of = (0..size).map(|x| rank[comps.component_of(x)]).collect();
        Self {
            class_of,
            classes,
            below,
        }
    }

    fn le(&self, x: Element, y: Element) -> bool {
        self.below[self.class_of[y]].contains(self.class_of[x])
    }
}

impl GreenStructure {
    pub fn compute(m: &FiniteMonoid) -> Self {
        let gens = m.generators().to_vec();
        let right = |x: usize| gens.iter().map(|&g| m.mul(x, g)).collect::<Vec<_>>();
        let left = |x: usize| gens.iter().map(|&g| m.mul(g, x)).collect::<Vec<_>>();
        let both = |x: usize| {
            let mut v = right(x);
            v.extend(left(x));
            v
        };
        Self {
            r: Relation::from_graph(m.size(), right),
            l: Relation::from_graph(m.size(), left),
            j: Relation::from_graph(m.size(), both),
        }
    }

    fn rel(&self, kind: GreenKind) -> &Relation {
        match kind {
            GreenKind::R => &self.r,
            GreenKind::L => &self.l,
            GreenKind::J => &self.j,
        }
    }

    pub fn class_of(&self, kind: GreenKind, x: Element) -> usize {
        self.rel(kind).class_of[x]
    }

    pub fn classes(&self, kind: GreenKind) -> &[Vec<Element>] {
        &self.rel(kind).classes
    }

    /// `x ≤_K y`
    pub fn le(&self, kind: GreenKind, x: Element, y: Element) -> bool {
        self.rel(kind).le(x, y)
    }

    pub fn equivalent(&self, kind: GreenKind, x: Element, y: Element) -> bool {
        self.class_of(kind, x) == self.class_of(kind, y)
    }

    /// Classes below class `c` (reflexive), as a set of class ids.
    pub fn classes_below(&self, kind: GreenKind, c: usize) -> &BitSet {
        &self.rel(kind).below[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::automata::{parse_regex, to_minimal_dfa};
    use crate::monoid::syntactic_monoid;

    /// Definitional check: x ≤_R y iff x ∈ yM, by sweeping the table.
    fn naive(m: &FiniteMonoid, kind: GreenKind, x: Element, y: Element) -> bool {
        m.elements().any(|s| {
            m.elements().any(|t| match kind {
                GreenKind::R => m.mul(y, s) == x,
                GreenKind::L => m.mul(t, y) == x,
                GreenKind::J => m.mul(m.mul(t, y), s) == x,
            })
        })
    }

    #[test]
    fn orders_match_definitions() {
        let al = Alphabet::from_letters("abc").unwrap();
        for re in ["(a|b|c)*ab(b|c)*", "(a|c)*ab(a|b|c)*", "b*a", "(ab)*|c"] {
            let (m, _) = syntactic_monoid(&to_minimal_dfa(&parse_regex(re, &al).unwrap())).unwrap();
            let g = m.green();
            for kind in [GreenKind::R, GreenKind::L, GreenKind::J] {
                for x in m.elements() {
                    for y in m.elements() {
                        assert_eq!(
                            g.le(kind, x, y),
                            naive(&m, kind, x, y),
                            "{re} {kind:?} {x} {y}"
                        );
                    }
                }
            }
            // R and L refine J
            for x in m.elements() {
                for y in m.elements() {
                    if g.equivalent(GreenKind::R, x, y) || g.equivalent(GreenKind::L, x, y) {
                        assert!(g.equivalent(GreenKind::J, x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn groups_have_single_classes() {
        for order in 1..=5 {
            let m = crate::monoid::tests::cyclic_group(order);
            let g = m.green();
            for kind in [GreenKind::R, GreenKind::L, GreenKind::J] {
                assert_eq!(g.classes(kind).len(), 1);
            }
        }
    }
}
