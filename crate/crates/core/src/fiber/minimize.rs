//! Contraction of redundant (−1)-curves, and the numerical walk down to the
//! relatively minimal fiber.

use std::collections::{BTreeMap, BTreeSet};

use super::{Component, FiberGraph, NodeEdge, ResolutionRecord};
use crate::error::{FiberError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub graph: FiberGraph,
    pub contractions: u32,
    /// (−1)-curves meeting the rest in two points that cannot be contracted
    /// without leaving the normal-crossing category.
    pub blocked: Vec<String>,
}

enum Verdict {
    Keep,
    Contract,
    Blocked,
}

fn verdict(c: &Component, loops: i64, nbrs: &BTreeMap<usize, i64>) -> Verdict {
    if c.genus != 0 || c.self_int != -1 {
        return Verdict::Keep;
    }
    let points: i64 = 2 * loops + nbrs.values().sum::<i64>();
    if points > 2 {
        return Verdict::Keep;
    }
    if loops == 0 && nbrs.values().all(|&k| k == 1) && !nbrs.is_empty() {
        Verdict::Contract
    } else {
        Verdict::Blocked
    }
}

/// Contracts redundant (−1)-curves until none is left.
///
/// Fails only when the blow-up metadata is smaller than the number of
/// contractions; curves that would leave the normal-crossing category are
/// reported in [`Minimized::blocked`] and kept.
pub fn minimize(f: &FiberGraph) -> Result<Minimized> {
    let n = f.len();
    let mut comps: Vec<Component> = f.components().to_vec();
    let loops = f.loops();
    let mut adj: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
    for e in f.nodes().iter().filter(|e| !e.is_loop()) {
        *adj[e.a].entry(e.b).or_default() += e.count;
        *adj[e.b].entry(e.a).or_default() += e.count;
    }
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<usize> = (0..n).collect();
    let mut contractions = 0u32;
    while let Some(v) = queue.pop_first() {
        if !alive[v] || !matches!(verdict(&comps[v], loops[v], &adj[v]), Verdict::Contract) {
            continue;
        }
        let nbrs: Vec<usize> = adj[v].keys().copied().collect();
        for &u in &nbrs {
            adj[u].remove(&v);
            comps[u].self_int += 1;
            queue.insert(u);
        }
        if let [u, w] = nbrs[..] {
            *adj[u].entry(w).or_default() += 1;
            *adj[w].entry(u).or_default() += 1;
        }
        adj[v].clear();
        alive[v] = false;
        contractions += 1;
    }
    let blocked = (0..n)
        .filter(|&v| alive[v] && matches!(verdict(&comps[v], loops[v], &adj[v]), Verdict::Blocked))
        .map(|v| comps[v].id.clone())
        .collect();
    if contractions == 0 {
        return Ok(Minimized {
            graph: f.clone(),
            contractions,
            blocked,
        });
    }
    let blowups = f.blowups().checked_sub(contractions).ok_or_else(|| {
        FiberError::NotAFiber(format!(
            "{contractions} redundant (-1)-curves but blowups = {}",
            f.blowups()
        ))
    })?;
    let mut new_index = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for v in (0..n).filter(|&v| alive[v]) {
        new_index[v] = kept.len();
        kept.push(comps[v].clone());
    }
    let mut nodes = Vec::new();
    for v in (0..n).filter(|&v| alive[v]) {
        if loops[v] > 0 {
            nodes.push(NodeEdge { a: new_index[v], b: new_index[v], count: loops[v] });
        }
        for (&w, &k) in adj[v].range(v + 1..) {
            nodes.push(NodeEdge { a: new_index[v], b: new_index[w], count: k });
        }
    }
    let graph = FiberGraph::from_parts_unchecked(f.name(), kept, nodes, blowups, None);
    Ok(Minimized {
        graph,
        contractions,
        blocked,
    })
}

/// Like [`minimize`], but a blocked curve is an error.
pub fn minimize_strict(f: &FiberGraph) -> Result<(FiberGraph, u32)> {
    let m = minimize(f)?;
    if let Some(id) = m.blocked.first() {
        return Err(FiberError::LeavesNormalCrossing(id.clone()));
    }
    Ok((m.graph, m.contractions))
}

/// True iff [`minimize`] would contract nothing.
pub fn is_minimal_nc(f: &FiberGraph) -> bool {
    let loops = f.loops();
    let mut adj: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); f.len()];
    for e in f.nodes().iter().filter(|e| !e.is_loop()) {
        *adj[e.a].entry(e.b).or_default() += e.count;
        *adj[e.b].entry(e.a).or_default() += e.count;
    }
    f.components()
        .iter()
        .enumerate()
        .all(|(v, c)| !matches!(verdict(c, loops[v], &adj[v]), Verdict::Contract))
}

/// Contracts smooth rational (−1)-curves numerically, tracking the
/// intersection form and arithmetic genera, until none is left.
///
/// Returns the multiplicities `m` of the reduced total transform at each
/// contracted point, in contraction order.
fn contract_numerically(f: &FiberGraph) -> Vec<i64> {
    let n = f.len();
    let mut selfs: Vec<i64> = f.components().iter().map(|c| c.self_int).collect();
    let loops = f.loops();
    let mut pa: Vec<i64> = f.components().iter().zip(&loops).map(|(c, l)| c.genus + l).collect();
    let mut inter: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    let add = |inter: &mut Vec<Vec<(usize, i64)>>, j: usize, k: usize, t: i64| match inter[j].iter_mut().find(|x| x.0 == k) {
        Some(x) => x.1 += t,
        None => inter[j].push((k, t)),
    };
    for e in f.nodes().iter().filter(|e| !e.is_loop()) {
        add(&mut inter, e.a, e.b, e.count);
        add(&mut inter, e.b, e.a, e.count);
    }
    // Always the lowest-index candidate, so the order is reproducible.
    let mut candidates: BTreeSet<usize> = (0..n).filter(|&v| pa[v] == 0 && selfs[v] == -1).collect();
    let mut remaining = n;
    let mut ms = Vec::new();
    while remaining > 1 {
        let Some(e) = candidates.pop_first() else {
            break;
        };
        let touching = std::mem::take(&mut inter[e]);
        ms.push(touching.iter().map(|(_, t)| t).sum());
        for &(j, t) in &touching {
            inter[j].retain(|x| x.0 != e);
            selfs[j] += t * t;
            pa[j] += t * (t - 1) / 2;
            if pa[j] == 0 && selfs[j] == -1 {
                candidates.insert(j);
            } else {
                candidates.remove(&j);
            }
        }
        for (x, &(j, tj)) in touching.iter().enumerate() {
            for &(k, tk) in &touching[x + 1..] {
                add(&mut inter, j, k, tj * tk);
                add(&mut inter, k, j, tj * tk);
            }
        }
        remaining -= 1;
    }
    ms
}

/// Number of blow-ups between this model and the relatively minimal fiber.
pub fn relatively_minimal_blowups(f: &FiberGraph) -> u32 {
    contract_numerically(f).len() as u32
}

/// Resolution record recovered by numerical contraction, if it has the
/// graph's blow-up count and every entry is at least 2.
pub fn derive_resolution(f: &FiberGraph) -> Option<ResolutionRecord> {
    let mut ms = contract_numerically(f);
    if ms.len() != f.blowups() as usize {
        return None;
    }
    ms.reverse();
    ResolutionRecord::new(ms).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::tests::{example16, kodaira_ii};
    use crate::fiber::{fiber_genus, FiberBuilder};

    #[test]
    fn minimal_graphs_unchanged() {
        let m = minimize(&kodaira_ii()).unwrap();
        assert_eq!(m.contractions, 0);
        assert!(is_minimal_nc(&kodaira_ii()));
        assert!(is_minimal_nc(&example16(4)));
    }

    #[test]
    fn contracts_chain_end() {
        // I0* with the node c-a blown up and a smooth point of b blown up.
        let f = FiberBuilder::new("blown")
            .component("c", 2, Some(-3), 0)
            .component("e", 3, Some(-1), 0)
            .component("a", 1, Some(-3), 0)
            .component("b", 1, Some(-3), 0)
            .component("y", 1, Some(-1), 0)
            .component("d", 1, Some(-2), 0)
            .component("x", 1, Some(-2), 0)
            .path(&["c", "e", "a"])
            .path(&["c", "b", "y"])
            .node("c", "d", 1)
            .node("c", "x", 1)
            .blowups(2)
            .build()
            .unwrap();
        assert!(!is_minimal_nc(&f));
        let m = minimize(&f).unwrap();
        assert_eq!(m.contractions, 2);
        assert_eq!(m.graph.len(), 5);
        assert_eq!(m.graph.blowups(), 0);
        assert_eq!(fiber_genus(&m.graph).unwrap(), 1);
        assert!(m.graph.components().iter().all(|c| c.self_int == -2));
    }

    #[test]
    fn blocked_tangent_pair() {
        // (−1)-curve meeting one neighbour twice: contracting creates a tangency.
        let f = FiberBuilder::new("t")
            .component("a", 1, Some(-4), 1)
            .component("e", 2, Some(-1), 0)
            .node("a", "e", 2)
            .build()
            .unwrap();
        let m = minimize(&f).unwrap();
        assert_eq!(m.contractions, 0);
        assert_eq!(m.blocked, vec!["e".to_string()]);
        assert!(minimize_strict(&f).is_err());
    }

    #[test]
    fn kodaira_ii_numerical_resolution() {
        let f = kodaira_ii();
        assert_eq!(relatively_minimal_blowups(&f), 3);
        assert_eq!(derive_resolution(&f).unwrap().mults(), &[2, 2, 3]);
    }
}
