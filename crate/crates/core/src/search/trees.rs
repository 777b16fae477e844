//! Unlabeled free trees, generated by leaf extension and deduplicated by a
//! centre-rooted AHU code.

use std::collections::BTreeSet;

/// Adjacency lists.
pub type Tree = Vec<Vec<usize>>;

fn centres(t: &Tree) -> Vec<usize> {
    let n = t.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = t.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &t[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

fn ahu(t: &Tree, v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = t[v].iter().filter(|&&w| w != parent).map(|&w| ahu(t, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant code of a free tree.
pub fn tree_code(t: &Tree) -> String {
    centres(t).into_iter().map(|c| ahu(t, c, usize::MAX)).min().unwrap_or_default()
}

/// Rebuilds a tree from its code, numbering vertices in preorder from the root.
fn from_code(code: &str) -> Tree {
    let mut t: Tree = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for ch in code.chars() {
        if ch == '(' {
            let v = t.len();
            t.push(Vec::new());
            if let Some(&p) = stack.last() {
                t[p].push(v);
                t[v].push(p);
            }
            stack.push(v);
        } else {
            stack.pop();
        }
    }
    t
}

/// Every free tree with `1..=max_vertices` vertices, by size then code.
/// Vertex 0 is a centre.
pub fn tree_shapes(max_vertices: usize) -> Vec<Tree> {
    let mut out: Vec<Tree> = Vec::new();
    if max_vertices == 0 {
        return out;
    }
    let mut level: BTreeSet<String> = BTreeSet::from(["()".to_string()]);
    for size in 1..=max_vertices {
        let trees: Vec<Tree> = level.iter().map(|c| from_code(c)).collect();
        if size == max_vertices {
            out.extend(trees);
            break;
        }
        let mut next = BTreeSet::new();
        for t in &trees {
            for v in 0..t.len() {
                let mut g = t.clone();
                let w = g.len();
                g.push(vec![v]);
                g[v].push(w);
                next.insert(tree_code(&g));
            }
        }
        out.extend(trees);
        level = next;
    }
    out
}

/// Labeled trees on `n` vertices from a Prüfer sequence.
pub(crate) fn from_pruefer(n: usize, seq: &[usize]) -> Tree {
    let mut t: Tree = vec![Vec::new(); n];
    if n == 2 {
        t[0].push(1);
        t[1].push(0);
        return t;
    }
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        t[leaf].push(s);
        t[s].push(leaf);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    t[rest[0]].push(rest[1]);
    t[rest[1]].push(rest[0]);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        // Free trees on n vertices: 1, 1, 1, 2, 3, 6, 11, 23, 47, 106.
        let shapes = tree_shapes(10);
        let mut counts = [0usize; 11];
        for t in &shapes {
            counts[t.len()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn pruefer_covers_the_same_shapes() {
        for n in 2..=7usize {
            let mut codes = BTreeSet::new();
            let total = n.pow(n as u32 - 2);
            for mut idx in 0..total {
                let mut seq = Vec::with_capacity(n - 2);
                for _ in 0..n - 2 {
                    seq.push(idx % n);
                    idx /= n;
                }
                codes.insert(tree_code(&from_pruefer(n, &seq)));
            }
            let shapes: BTreeSet<String> = tree_shapes(n).iter().filter(|t| t.len() == n).map(tree_code).collect();
            assert_eq!(codes, shapes, "n = {n}");
        }
    }
}
