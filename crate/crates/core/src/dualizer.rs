//! Dual fibers by Hirzebruch–Jung chain insertion.
//!
//! For `n ≡ −1 (mod M_F)` every node between branches of multiplicity `a` and
//! `b` is replaced by the chain of type `(n, q)` with `b + qa ≡ 0 (mod n)`.
//! Original components keep multiplicity and genus; their self-intersections
//! are re-solved from Zariski.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{hj_expand, inverse_mod, HjChain};
use crate::error::{FiberError, Result};
use crate::fiber::{fiber_genus, relatively_minimal_blowups, Component, FiberGraph, NodeEdge};
use crate::invariants::{chi_via_pairs, compute_invariants, n_bar};
use crate::rational::{int, Rational};

/// `M_F`, the lcm of all multiplicities.
pub fn multiplicity_lcm(f: &FiberGraph) -> i64 {
    f.mult_lcm()
}

/// The default base-change degree: `M_F − 1`, or 1 (identity) when `M_F = 1`.
pub fn default_degree(f: &FiberGraph) -> i64 {
    let m = multiplicity_lcm(f);
    if m >= 2 {
        m - 1
    } else {
        1
    }
}

/// A chain together with its multiplicities `γ₀..γ_{r+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeChain {
    pub chain: HjChain,
    pub gammas: Vec<i64>,
}

impl NodeChain {
    /// The same chain read from the `b` side.
    pub fn reversed(&self) -> NodeChain {
        let es: Vec<i64> = self.chain.es.iter().rev().copied().collect();
        let chain = HjChain::from_es(&es).expect("reversed chain is valid");
        NodeChain {
            chain,
            gammas: self.gammas.iter().rev().copied().collect(),
        }
    }
}

/// Chain resolving the node between branches of multiplicity `a` and `b`
/// after an `n`-th root base change; `γ₁` sits next to the `a` side.
pub fn node_chain(a: i64, b: i64, n: i64) -> Result<NodeChain> {
    if a < 1 || b < 1 || n < 2 {
        return Err(FiberError::InvalidArgument(format!(
            "node_chain needs a, b >= 1 and n >= 2, got ({a}, {b}, {n})"
        )));
    }
    if a.gcd(&n) != 1 || b.gcd(&n) != 1 {
        return Err(FiberError::InvalidArgument(format!(
            "node_chain needs gcd(a, n) = gcd(b, n) = 1, got ({a}, {b}, {n})"
        )));
    }
    let inv = inverse_mod(a, n).expect("a is a unit mod n");
    let q = ((-b).rem_euclid(n) as i128 * inv as i128 % n as i128) as i64;
    let chain = hj_expand(n, q)?;
    let mut gammas = Vec::with_capacity(chain.len() + 2);
    gammas.push(a);
    gammas.push((q * a + b) / n);
    for (k, &e) in chain.es.iter().enumerate() {
        let next = e * gammas[k + 1] - gammas[k];
        gammas.push(next);
    }
    if *gammas.last().expect("non-empty") != b {
        return Err(FiberError::Inconsistent(format!(
            "chain for ({a}, {b}, {n}) ends at {} instead of {b}",
            gammas.last().unwrap()
        )));
    }
    let r = chain.len();
    for i in 1..=r {
        if (gammas[i - 1] + gammas[i + 1]) % gammas[i] != 0 {
            return Err(FiberError::Inconsistent(format!(
                "chain for ({a}, {b}, {n}): γ{i} does not divide its neighbours"
            )));
        }
    }
    let admissible = (n + 1) % a == 0 && (n + 1) % b == 0;
    if admissible
        && ((gammas[1] + gammas[r + 1]) % gammas[0] != 0 || (gammas[r] + gammas[0]) % gammas[r + 1] != 0)
    {
        return Err(FiberError::Inconsistent(format!(
            "chain for ({a}, {b}, {n}): end divisibility fails"
        )));
    }
    Ok(NodeChain { chain, gammas })
}

/// Raw dual model: chains inserted at every node, not minimized.
///
/// `n = None` picks [`default_degree`]. The output's blow-up count is the
/// number of smooth rational (−1)-curves that have to be contracted to reach
/// the relatively minimal dual fiber.
pub fn dual_fiber(f: &FiberGraph, n: Option<i64>) -> Result<FiberGraph> {
    let m = multiplicity_lcm(f);
    let n = n.unwrap_or_else(|| default_degree(f));
    if n < 1 || (n + 1) % m != 0 {
        return Err(FiberError::InvalidArgument(format!(
            "n = {n} is not congruent to -1 modulo M_F = {m}"
        )));
    }
    if n == 1 {
        return Ok(f.clone().with_name(format!("{}*", f.name())));
    }
    let src = f.components();
    let mut comps: Vec<Component> = src.to_vec();
    // Generated ids contain ':'; collisions are only possible if a source id does too.
    let mut used: Option<HashSet<String>> = src
        .iter()
        .any(|c| c.id.contains(':'))
        .then(|| src.iter().map(|c| c.id.clone()).collect());
    let mut pull = vec![0i64; src.len()];
    let mut nodes = Vec::new();
    for e in f.nodes() {
        let (ca, cb) = (&src[e.a], &src[e.b]);
        let nc = node_chain(ca.mult, cb.mult, n)?;
        let r = nc.chain.len();
        for copy in 0..e.count {
            let mut prev = e.a;
            for i in 1..=r {
                let mut id = format!("{}:{}:{}:{}", ca.id, cb.id, copy, i);
                if let Some(used) = used.as_mut() {
                    while used.contains(&id) {
                        id.push('\'');
                    }
                    used.insert(id.clone());
                }
                comps.push(Component {
                    id,
                    mult: nc.gammas[i],
                    self_int: -nc.chain.es[i - 1],
                    genus: 0,
                });
                let idx = comps.len() - 1;
                nodes.push(NodeEdge { a: prev, b: idx, count: 1 });
                prev = idx;
            }
            nodes.push(NodeEdge { a: prev, b: e.b, count: 1 });
            pull[e.a] += nc.gammas[1];
            pull[e.b] += nc.gammas[r];
        }
    }
    for (i, c) in src.iter().enumerate() {
        if pull[i] % c.mult != 0 {
            return Err(FiberError::Inconsistent(format!(
                "strict transform of `{}` has self-intersection -{}/{}",
                c.id, pull[i], c.mult
            )));
        }
        comps[i].self_int = -pull[i] / c.mult;
    }
    let raw = FiberGraph::from_parts(format!("{}*", f.name()), comps, nodes, 0, None)
        .map_err(|e| FiberError::Inconsistent(format!("dual model rejected: {e}")))?;
    let r = relatively_minimal_blowups(&raw);
    raw.with_blowups(r, None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub chi: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub chi_dual: Rational,
    pub n_bar: i64,
    pub n_bar_dual: i64,
    pub genus: i64,
    pub genus_dual: i64,
    pub n: i64,
    pub ok: bool,
}

/// `χ_F + χ_{F*} = N̄`, `N̄(F*) = N̄(F)` and `g(F*) = g(F)`.
pub fn duality_check(f: &FiberGraph, n: Option<i64>) -> Result<DualityCheck> {
    let n = n.unwrap_or_else(|| default_degree(f));
    let dual = dual_fiber(f, Some(n))?;
    let chi = compute_invariants(f)?.chi;
    let chi_dual = chi_via_pairs(&dual)?;
    let nb = n_bar(f)?;
    let nb_dual = n_bar(&dual)?;
    let genus = fiber_genus(f)?;
    let genus_dual = fiber_genus(&dual)?;
    let ok = &chi + &chi_dual == int(nb) && nb_dual == nb && genus_dual == genus;
    Ok(DualityCheck {
        chi,
        chi_dual,
        n_bar: nb,
        n_bar_dual: nb_dual,
        genus,
        genus_dual,
        n,
        ok,
    })
}
