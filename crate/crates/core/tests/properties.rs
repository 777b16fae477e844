//! Whole-catalog properties: regression, relabeling, blow-ups, minimization and double duals.

use fibercalc::catalog;
use fibercalc::fiber::minimize;
use fibercalc::rational::int;
use fibercalc::{
    canonical_form, compute_invariants, dual_fiber, multiplicity_lcm, Component, FiberGraph, NodeEdge,
};
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Component `i` of `f` becomes component `perm[i]`.
fn permuted(f: &FiberGraph, perm: &[usize]) -> FiberGraph {
    let mut comps: Vec<Option<Component>> = vec![None; f.len()];
    for (i, c) in f.components().iter().enumerate() {
        comps[perm[i]] = Some(c.clone());
    }
    let nodes = f
        .nodes()
        .iter()
        .map(|e| NodeEdge {
            a: perm[e.a],
            b: perm[e.b],
            count: e.count,
        })
        .collect();
    let comps = comps.into_iter().map(|c| c.expect("perm is a bijection")).collect();
    FiberGraph::from_parts(f.name(), comps, nodes, f.blowups(), f.resolution().cloned()).unwrap()
}

fn random_perm(n: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Blows up a node between distinct components, or a smooth point when `node` is `None`.
fn blow_up(f: &FiberGraph, node: Option<usize>, at: usize) -> FiberGraph {
    let mut comps = f.components().to_vec();
    let mut nodes = f.nodes().to_vec();
    let e_idx = comps.len();
    match node {
        Some(k) => {
            let NodeEdge { a, b, .. } = nodes[k];
            let mult = comps[a].mult + comps[b].mult;
            comps[a].self_int -= 1;
            comps[b].self_int -= 1;
            nodes[k].count -= 1;
            if nodes[k].count == 0 {
                nodes.remove(k);
            }
            nodes.push(NodeEdge { a, b: e_idx, count: 1 });
            nodes.push(NodeEdge { a: b, b: e_idx, count: 1 });
            comps.push(Component {
                id: format!("x{e_idx}"),
                mult,
                self_int: -1,
                genus: 0,
            });
        }
        None => {
            comps[at].self_int -= 1;
            nodes.push(NodeEdge { a: at, b: e_idx, count: 1 });
            comps.push(Component {
                id: format!("x{e_idx}"),
                mult: comps[at].mult,
                self_int: -1,
                genus: 0,
            });
        }
    }
    FiberGraph::from_parts(f.name(), comps, nodes, f.blowups() + 1, None).unwrap()
}

fn random_blow_up(f: &FiberGraph, rng: &mut StdRng) -> FiberGraph {
    let proper: Vec<usize> = (0..f.nodes().len()).filter(|&k| !f.nodes()[k].is_loop()).collect();
    if !proper.is_empty() && rng.gen_bool(0.5) {
        blow_up(f, Some(*proper.choose(rng).unwrap()), 0)
    } else {
        blow_up(f, None, rng.gen_range(0..f.len()))
    }
}

#[test]
fn catalog_regression() {
    for e in catalog::all() {
        let b = compute_invariants(&e.graph).unwrap();
        let m = e.expected.mismatches(&b);
        assert!(m.is_empty(), "{}: {m:?}", e.key);
    }
}

#[test]
fn canonical_form_ignores_relabeling() {
    let mut rng = StdRng::seed_from_u64(11);
    for e in catalog::all() {
        let want = canonical_form(&e.graph);
        for _ in 0..100 {
            let p = random_perm(e.graph.len(), &mut rng);
            assert_eq!(canonical_form(&permuted(&e.graph, &p)), want, "{}", e.key);
        }
    }
}

#[test]
fn synthetic_blow_ups_keep_invariants() {
    let mut rng = StdRng::seed_from_u64(7);
    for e in catalog::all() {
        let base = compute_invariants(&e.graph).unwrap();
        let mut f = e.graph.clone();
        for step in 1..=4 {
            f = random_blow_up(&f, &mut rng);
            let b = compute_invariants(&f).unwrap();
            assert_eq!(b.n_bar, base.n_bar, "{} after {step} blow-ups", e.key);
            assert!(0 <= b.n_bar && b.n_bar <= b.g, "{}", e.key);
            assert_eq!(b.chern(), base.chern(), "{} after {step} blow-ups", e.key);
            assert_eq!(b.g, base.g);
        }
    }
}

#[test]
fn minimize_is_order_independent() {
    let mut rng = StdRng::seed_from_u64(3);
    for e in catalog::all() {
        let reference = canonical_form(&minimize(&e.graph).unwrap().graph);
        for _ in 0..5 {
            let mut f = e.graph.clone();
            for _ in 0..rng.gen_range(1..=4) {
                f = random_blow_up(&f, &mut rng);
            }
            for _ in 0..4 {
                let p = random_perm(f.len(), &mut rng);
                let m = minimize(&permuted(&f, &p)).unwrap();
                assert_eq!(canonical_form(&m.graph), reference, "{}", e.key);
            }
        }
    }
}

#[test]
fn double_dual_keeps_chi() {
    let mut checked = 0;
    for e in catalog::all() {
        if multiplicity_lcm(&e.graph) > 60 {
            continue;
        }
        let dual = minimize(&dual_fiber(&e.graph, None).unwrap()).unwrap().graph;
        if multiplicity_lcm(&dual) > 60 {
            continue;
        }
        let double = dual_fiber(&dual, None).unwrap();
        let chi = compute_invariants(&e.graph).unwrap().chi;
        let chi2 = compute_invariants(&double).unwrap().chi;
        assert_eq!(chi, chi2, "{}", e.key);
        let n_bar = compute_invariants(&e.graph).unwrap().n_bar;
        assert_eq!(&chi + &compute_invariants(&dual).unwrap().chi, int(n_bar), "{}", e.key);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} fibers small enough");
}
