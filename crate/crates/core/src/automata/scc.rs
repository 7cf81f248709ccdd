//! Strongly connected components (iterative Tarjan) and their condensation.

use crate::automata::nfa::Nfa;
use crate::bitset::BitSet;

/// SCC partition of a directed graph on `0..n`.
///
/// `components` is listed in topological order of the condensation: if a
/// component `c` reaches a different component `d`, then `c` comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
    successors: Vec<Vec<usize>>,
}

impl Components {
    pub fn compute<F, I>(n: usize, mut succ: F) -> Self
    where
        F: FnMut(usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        let adj: Vec<Vec<usize>> = (0..n).map(|v| succ(v).into_iter().collect()).collect();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut found: Vec<Vec<usize>> = Vec::new();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (vertex, position in its adjacency list)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < adj[v].len() {
                    let w = adj[v][*pos];
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        found.push(comp);
                    }
                }
            }
        }
        // Tarjan emits sinks first.
        found.reverse();
        let mut component_of = vec![0; n];
        for (c, comp) in found.iter().enumerate() {
            for &v in comp {
                component_of[v] = c;
            }
        }
        let mut successors = vec![Vec::new(); found.len()];
        for (v, outs) in adj.iter().enumerate() {
            for &w in outs {
                let (cv, cw) = (component_of[v], component_of[w]);
                if cv != cw {
                    successors[cv].push(cw);
                }
            }
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        Self {
            component_of,
            components: found,
            successors,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Direct successors of component `c` in the condensation.
    pub fn condensation_successors(&self, c: usize) -> &[usize] {
        &self.successors[c]
    }

    /// For every component, the set of components reachable from it
    /// (reflexive).
    pub fn reachability(&self) -> Vec<BitSet> {
        let k = self.len();
        let mut reach: Vec<BitSet> = vec![BitSet::new(k); k];
        for c in (0..k).rev() {
            let mut set = BitSet::new(k);
            set.insert(c);
            for &d in &self.successors[c] {
                set.union_with(&reach[d]);
            }
            reach[c] = set;
        }
        reach
    }
}

/// SCCs of the transition graph of `a` (edges on any letter).
pub fn strongly_connected_components(a: &Nfa) -> Components {
    Components::compute(a.num_states(), |q| a.neighbours(q).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    #[test]
    fn topological_order_and_partition() {
        // 0 -> 1 <-> 2 -> 3, 3 self loop
        let g = [vec![1], vec![2], vec![1, 3], vec![3]];
        let c = Components::compute(4, |v| g[v].clone());
        assert_eq!(c.components(), &[vec![0], vec![1, 2], vec![3]]);
        let r = c.reachability();
        assert!(r[0].contains(2) && !r[2].contains(0));
        assert_eq!(c.component_of(2), 1);
    }

    #[test]
    fn two_cycle_and_self_loops() {
        let ab = Alphabet::from_letters("ab").unwrap();
        let pq = Nfa::new(ab.clone(), 2, [(0, 0, 1), (1, 1, 0)], [0], [1]).unwrap();
        assert_eq!(strongly_connected_components(&pq).len(), 1);
        let one = Nfa::new(ab, 1, [(0, 0, 0), (0, 1, 0)], [0], [0]).unwrap();
        assert_eq!(strongly_connected_components(&one).components(), &[vec![0]]);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let c = Components::compute(n, |v| if v + 1 < n { vec![v + 1] } else { vec![] });
        assert_eq!(c.len(), n);
        assert_eq!(c.component_of(0), 0);
    }
}
