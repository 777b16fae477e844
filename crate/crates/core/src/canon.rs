//! Canonical labeling of decorated multigraphs.
//!
//! Colour refinement seeded by `(mult, self, genus, loops)`, followed by
//! individualization with full backtracking. The lexicographically smallest
//! relabeled encoding wins. Twin vertices (same colour, same neighbourhood)
//! are interchangeable, so only one of them is tried per cell.

use std::collections::BTreeMap;

use crate::fiber::FiberGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    /// Isomorphism-invariant string.
    pub label: String,
    /// `order[p]` is the component placed at canonical position `p`.
    pub order: Vec<usize>,
}

struct Graph {
    inv: Vec<[i64; 4]>,
    adj: Vec<Vec<(usize, i64)>>,
}

impl Graph {
    fn from_fiber(f: &FiberGraph) -> Graph {
        let loops = f.loops();
        let inv = f
            .components()
            .iter()
            .zip(&loops)
            .map(|(c, &l)| [c.mult, c.self_int, c.genus, l])
            .collect();
        let mut adj = f.adjacency();
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { inv, adj }
    }

    fn len(&self) -> usize {
        self.inv.len()
    }

    /// Refines until stable; colours are dense ranks ordered by signature.
    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        let mut classes = count_classes(&colour);
        loop {
            let sigs: Vec<(usize, Vec<(usize, i64)>)> = (0..self.len())
                .map(|v| {
                    let mut s: Vec<(usize, i64)> = self.adj[v].iter().map(|&(w, k)| (colour[w], k)).collect();
                    s.sort_unstable();
                    (colour[v], s)
                })
                .collect();
            colour = dense_ranks(&sigs);
            let next = count_classes(&colour);
            if next == classes {
                return colour;
            }
            classes = next;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<i64> {
        let mut pos = vec![0usize; self.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut out = Vec::with_capacity(5 * self.len());
        for &v in order {
            out.extend_from_slice(&self.inv[v]);
        }
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        for v in 0..self.len() {
            for &(w, k) in &self.adj[v] {
                if pos[v] < pos[w] {
                    edges.push((pos[v], pos[w], k));
                }
            }
        }
        edges.sort_unstable();
        for (a, b, k) in edges {
            out.extend_from_slice(&[a as i64, b as i64, k]);
        }
        out
    }

    fn twins(&self, v: usize, w: usize) -> bool {
        let strip = |x: usize, y: usize| -> Vec<(usize, i64)> {
            self.adj[x].iter().copied().filter(|&(z, _)| z != y).collect()
        };
        strip(v, w) == strip(w, v)
    }

    fn search(&self, colour: Vec<usize>, best: &mut Option<(Vec<i64>, Vec<usize>)>) {
        let colour = self.refine(colour);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colour.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let Some(cell) = cells.values().find(|c| c.len() > 1) else {
            let mut order: Vec<usize> = (0..self.len()).collect();
            order.sort_by_key(|&v| colour[v]);
            let code = self.encode(&order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in cell {
            if tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            let mut next: Vec<usize> = colour.iter().map(|&c| 2 * c + 1).collect();
            next[v] -= 1;
            self.search(next, best);
        }
    }
}

fn count_classes(colour: &[usize]) -> usize {
    let mut c: Vec<usize> = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn dense_ranks<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

/// Canonical order plus the invariant label.
pub fn canonical_labeling(f: &FiberGraph) -> Labeling {
    let g = Graph::from_fiber(f);
    if g.len() == 0 {
        return Labeling {
            label: String::new(),
            order: Vec::new(),
        };
    }
    let initial = dense_ranks(&g.inv);
    let mut best = None;
    g.search(initial, &mut best);
    let (_, order) = best.expect("at least one leaf");
    let label = render(&g, &order);
    Labeling { label, order }
}

/// String equal for two graphs iff they are decorated-isomorphic.
pub fn canonical_form(f: &FiberGraph) -> String {
    canonical_labeling(f).label
}

fn render(g: &Graph, order: &[usize]) -> String {
    let mut pos = vec![0usize; g.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let verts: Vec<String> = order
        .iter()
        .map(|&v| {
            let [m, s, gen, l] = g.inv[v];
            let mut t = format!("{m}({s})");
            if gen != 0 {
                t.push_str(&format!("g{gen}"));
            }
            if l != 0 {
                t.push_str(&format!("o{l}"));
            }
            t
        })
        .collect();
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for v in 0..g.len() {
        for &(w, k) in &g.adj[v] {
            if pos[v] < pos[w] {
                edges.push((pos[v], pos[w], k));
            }
        }
    }
    edges.sort_unstable();
    let edges: Vec<String> = edges
        .into_iter()
        .map(|(a, b, k)| if k == 1 { format!("{a}-{b}") } else { format!("{a}-{b}x{k}") })
        .collect();
    format!("{}|{}", verts.join(" "), edges.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::tests::{example16, kodaira_ii};
    use crate::fiber::{Component, NodeEdge};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    /// Relabels components by `perm` (new index of old component `i` is `perm[i]`).
    pub(crate) fn permuted(f: &FiberGraph, perm: &[usize]) -> FiberGraph {
        let mut comps: Vec<Option<Component>> = vec![None; f.len()];
        for (i, c) in f.components().iter().enumerate() {
            comps[perm[i]] = Some(c.clone());
        }
        let nodes = f
            .nodes()
            .iter()
            .map(|e| NodeEdge { a: perm[e.a], b: perm[e.b], count: e.count })
            .collect();
        FiberGraph::from_parts_unchecked(f.name(), comps.into_iter().map(Option::unwrap).collect(), nodes, f.blowups(), None)
    }

    #[test]
    fn kodaira_ii_label() {
        assert_eq!(canonical_form(&kodaira_ii()), "1(-6) 2(-3) 3(-2) 6(-1)|0-3 1-3 2-3");
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for f in [kodaira_ii(), example16(2), example16(5)] {
            let base = canonical_form(&f);
            let mut perm: Vec<usize> = (0..f.len()).collect();
            for _ in 0..50 {
                perm.shuffle(&mut rng);
                assert_eq!(canonical_form(&permuted(&f, &perm)), base);
            }
        }
    }

    #[test]
    fn distinguishes_decorations() {
        assert_ne!(canonical_form(&example16(2)), canonical_form(&example16(3)));
    }

    fn cycle(len: usize, chords: &[(usize, usize)]) -> FiberGraph {
        let comps = (0..len)
            .map(|i| Component { id: format!("v{i}"), mult: 1, self_int: -2, genus: 0 })
            .collect();
        let mut nodes: Vec<NodeEdge> = (0..len).map(|i| NodeEdge { a: i, b: (i + 1) % len, count: 1 }).collect();
        nodes.extend(chords.iter().map(|&(a, b)| NodeEdge { a, b, count: 1 }));
        FiberGraph::from_parts_unchecked("c", comps, nodes, 0, None)
    }

    #[test]
    fn regular_graphs_separated_by_backtracking() {
        // Two 3-regular graphs on 6 vertices that refinement alone cannot split.
        let prism = cycle(6, &[(0, 3), (1, 4), (2, 5)]);
        let k33 = cycle(6, &[(0, 2), (1, 4), (3, 5)]);
        assert_ne!(canonical_form(&prism), canonical_form(&k33));
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut perm: Vec<usize> = (0..6).collect();
        for _ in 0..30 {
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&permuted(&prism, &perm)), canonical_form(&prism));
            assert_eq!(canonical_form(&permuted(&k33, &perm)), canonical_form(&k33));
        }
    }

    proptest! {
        #[test]
        fn random_multigraphs(edges in proptest::collection::vec((0usize..7, 0usize..7, 1i64..3), 0..14),
                              seed in any::<u64>()) {
            let comps: Vec<Component> = (0..7)
                .map(|i| Component { id: format!("v{i}"), mult: 1 + (i as i64 % 2), self_int: -2, genus: 0 })
                .collect();
            let nodes: Vec<NodeEdge> = edges.iter().map(|&(a, b, count)| NodeEdge { a, b, count }).collect();
            let f = FiberGraph::from_parts_unchecked("r", comps, nodes, 0, None);
            let mut perm: Vec<usize> = (0..7).collect();
            perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            prop_assert_eq!(canonical_form(&permuted(&f, &perm)), canonical_form(&f));
        }
    }
}
