//! Local invariants and Chern numbers of a fiber.
//!
//! Bar-level values come from the minimal normal-crossing model:
//!
//! ```text
//! c₁² = 4N̄ + F̄²_red − β⁻      c₂ = 2N̄ + μ − β⁺      12χ = 6N̄ + F̄²_red + μ − β
//! ```
//!
//! and the relatively minimal fiber is reached by shifting with the blow-up
//! count `r`: `c₁² + r`, `c₂ − r`. When a resolution record is known, the
//! minimal-level formulas with `α` and `N` are evaluated as a second path and
//! must agree exactly.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{branch_beta, bracket, chi_pair_unchecked, rational_sum, HjChain};
use crate::error::{FiberError, Result};
use crate::fiber::{derive_resolution, fiber_genus, minimize, FiberGraph, ResolutionRecord};
use crate::rational::{fmt_exact, int, ratio, to_i64, Rational};

/// Where the resolution record used for `α` and `N_min` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordSource {
    /// Attached to the input graph.
    Given,
    /// Recovered by contracting smooth rational (−1)-curves numerically.
    Derived,
    /// No record: `α = 0` and `N_min = N̄`.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBundle {
    pub g: i64,
    pub pa_red: i64,
    pub n_bar: i64,
    pub n_min: i64,
    pub mu: i64,
    pub alpha: Rational,
    pub beta: Rational,
    pub beta_minus: Rational,
    pub beta_plus: Rational,
    pub fred_sq: i64,
    pub c1sq_bar: Rational,
    pub c2_bar: Rational,
    pub chi: Rational,
    pub c1sq_min: Rational,
    pub c2_min: Rational,
    /// Blow-ups `r` of the minimized model.
    pub blowups: u32,
    /// Redundant (−1)-curves contracted before computing.
    pub contractions: u32,
    pub record: RecordSource,
}

/// Field names in output order.
pub const FIELD_NAMES: [&str; 17] = [
    "g",
    "pa_red",
    "N_bar",
    "N_min",
    "mu",
    "alpha",
    "beta",
    "beta_minus",
    "beta_plus",
    "fred_sq",
    "c1sq_bar",
    "c2_bar",
    "chi",
    "c1sq_min",
    "c2_min",
    "blowups",
    "contractions",
];

impl InvariantBundle {
    /// Every numeric field as `(name, value)` in [`FIELD_NAMES`] order.
    pub fn entries(&self) -> Vec<(&'static str, Rational)> {
        let vals = [
            int(self.g),
            int(self.pa_red),
            int(self.n_bar),
            int(self.n_min),
            int(self.mu),
            self.alpha.clone(),
            self.beta.clone(),
            self.beta_minus.clone(),
            self.beta_plus.clone(),
            int(self.fred_sq),
            self.c1sq_bar.clone(),
            self.c2_bar.clone(),
            self.chi.clone(),
            self.c1sq_min.clone(),
            self.c2_min.clone(),
            int(self.blowups as i64),
            int(self.contractions as i64),
        ];
        FIELD_NAMES.iter().copied().zip(vals).collect()
    }

    /// Looks a field up by name. `N`, `c1sq` and `c2` alias the minimal level.
    pub fn get(&self, name: &str) -> Option<Rational> {
        let name = match name {
            "N" => "N_min",
            "c1sq" => "c1sq_min",
            "c2" => "c2_min",
            other => other,
        };
        self.entries().into_iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    /// `(c₁², c₂, χ)` of the relatively minimal fiber.
    pub fn chern(&self) -> (Rational, Rational, Rational) {
        (self.c1sq_min.clone(), self.c2_min.clone(), self.chi.clone())
    }

    /// `2c₂ − c₁²` at the minimal level.
    pub fn gap(&self) -> Rational {
        int(2) * &self.c2_min - &self.c1sq_min
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.entries() {
            let value = match to_i64(&v) {
                Some(i) => serde_json::Value::from(i),
                None => serde_json::Value::from(fmt_exact(&v)),
            };
            map.insert(k.to_string(), value);
        }
        map.insert("record".into(), serde_json::to_value(self.record).expect("enum serializes"));
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for InvariantBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k} = {}", fmt_exact(&v))?;
        }
        Ok(())
    }
}

/// `Σ genus + b₁` of the reduced normal-crossing model.
pub fn reduced_pa(f: &FiberGraph) -> i64 {
    let genus: i64 = f.components().iter().map(|c| c.genus).sum();
    genus + f.node_count() - f.len() as i64 + 1
}

/// `N̄ = g − p_a(F̄_red)`.
pub fn n_bar(f: &FiberGraph) -> Result<i64> {
    Ok(fiber_genus(f)? - reduced_pa(f))
}

/// A Hirzebruch–Jung branch: a chain of smooth rational curves from a leaf
/// to the first curve that is not a pass-through vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjBranch {
    pub leaf: String,
    pub bullet: String,
    pub chain: HjChain,
}

/// Branches of `f`, which must already be minimal.
fn branches_of_minimal(f: &FiberGraph) -> Result<Vec<HjBranch>> {
    let comps = f.components();
    let adj = f.adjacency();
    let loops = f.loops();
    let degree = f.degrees();
    let plain = |v: usize| comps[v].genus == 0 && loops[v] == 0;
    let mut out = Vec::new();
    for leaf in 0..f.len() {
        if degree[leaf] != 1 || !plain(leaf) {
            continue;
        }
        let mut path = vec![leaf];
        let mut prev = usize::MAX;
        let mut cur = leaf;
        let bullet = loop {
            let next = adj[cur]
                .iter()
                .map(|&(w, _)| w)
                .find(|&w| w != prev)
                .ok_or_else(|| FiberError::Inconsistent(format!("branch walk stuck at `{}`", comps[cur].id)))?;
            if degree[next] >= 3 || !plain(next) {
                break next;
            }
            if degree[next] == 1 {
                return Err(FiberError::Inconsistent(format!(
                    "branch from `{}` ends at another leaf `{}`",
                    comps[leaf].id, comps[next].id
                )));
            }
            path.push(next);
            (prev, cur) = (cur, next);
        };
        let es: Vec<i64> = path.iter().map(|&v| -comps[v].self_int).collect();
        let chain = HjChain::from_es(&es).map_err(|e| {
            FiberError::Inconsistent(format!("branch from `{}`: {e}", comps[leaf].id))
        })?;
        let g1 = comps[leaf].mult;
        let gammas = path.iter().map(|&v| comps[v].mult).chain([comps[bullet].mult]);
        for (gamma, mu) in gammas.zip(&chain.mus) {
            if gamma != mu * g1 {
                return Err(FiberError::Inconsistent(format!(
                    "branch from `{}`: multiplicity {gamma} is not {mu}·{g1}",
                    comps[leaf].id
                )));
            }
        }
        out.push(HjBranch {
            leaf: comps[leaf].id.clone(),
            bullet: comps[bullet].id.clone(),
            chain,
        });
    }
    Ok(out)
}

/// H-J branches of the minimal normal-crossing model of `f`.
pub fn hj_branches(f: &FiberGraph) -> Result<Vec<HjBranch>> {
    let m = minimize(f)?;
    branches_of_minimal(&m.graph)
}

/// All invariants, computed on the minimized graph.
pub fn compute_invariants(f: &FiberGraph) -> Result<InvariantBundle> {
    let g = fiber_genus(f)?;
    let m = minimize(f)?;
    let mg = &m.graph;
    let comps = mg.components();
    let r = mg.blowups();

    let pa_red = reduced_pa(mg);
    let n_bar = g - pa_red;
    let mu = mg.node_count();
    let beta = rational_sum(
        mg.nodes()
            .iter()
            .map(|e| bracket(comps[e.a].mult, comps[e.b].mult) * int(e.count)),
    );
    let beta_minus = rational_sum(branches_of_minimal(mg)?.iter().map(|b| branch_beta(&b.chain)));
    let beta_plus = &beta - &beta_minus;
    let self_sum: i64 = comps.iter().map(|c| c.self_int).sum();
    let cross: i64 = mg.nodes().iter().filter(|e| !e.is_loop()).map(|e| e.count).sum();
    let fred_sq = self_sum + 2 * cross;

    let c1sq_bar = int(4 * n_bar + fred_sq) - &beta_minus;
    let c2_bar = int(2 * n_bar + mu) - &beta_plus;
    let twelve_chi = int(6 * n_bar + fred_sq + mu) - &beta;
    if &c1sq_bar + &c2_bar != twelve_chi {
        return Err(FiberError::Inconsistent("Noether identity fails at bar level".into()));
    }
    let chi = twelve_chi / int(12);
    let c1sq_min = &c1sq_bar + int(r as i64);
    let c2_min = &c2_bar - int(r as i64);

    let (record, source): (Option<ResolutionRecord>, RecordSource) = match (m.contractions, f.resolution()) {
        (0, Some(rec)) => (Some(rec.clone()), RecordSource::Given),
        _ if r == 0 => (None, RecordSource::None),
        _ => match derive_resolution(mg) {
            Some(rec) => (Some(rec), RecordSource::Derived),
            None => (None, RecordSource::None),
        },
    };
    let (alpha, n_min) = match &record {
        Some(rec) => {
            let n_min = n_bar - rec.genus_drop();
            let fred_min = fred_sq + rec.square_gain();
            let milnor_gain: i64 = rec.mults().iter().map(|m| (m - 1) * (m - 2)).sum();
            let mu_min = mu + milnor_gain - r as i64;
            let alpha = int(rec.alpha());
            let c1_direct = int(4 * n_min + fred_min) + &alpha - &beta_minus;
            let c2_direct = int(2 * n_min + mu_min) - &beta_plus;
            if c1_direct != c1sq_min || c2_direct != c2_min {
                return Err(FiberError::Inconsistent(format!(
                    "minimal-level formulas give ({c1_direct}, {c2_direct}), blow-up shift gives ({c1sq_min}, {c2_min})"
                )));
            }
            (alpha, n_min)
        }
        None => (int(0), n_bar),
    };

    Ok(InvariantBundle {
        g,
        pa_red,
        n_bar,
        n_min,
        mu,
        alpha,
        beta,
        beta_minus,
        beta_plus,
        fred_sq,
        c1sq_bar,
        c2_bar,
        chi,
        c1sq_min,
        c2_min,
        blowups: r,
        contractions: m.contractions,
        record: source,
    })
}

/// `χ = N̄/2 − Σ χ(nₐ, n_b)·count` over node edges.
pub fn chi_via_pairs(f: &FiberGraph) -> Result<Rational> {
    let n = n_bar(f)?;
    let comps = f.components();
    let pairs = rational_sum(
        f.nodes()
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| chi_pair_unchecked(comps[e.a].mult, comps[e.b].mult) * int(e.count)),
    );
    Ok(ratio(n, 2) - pairs)
}

/// ADE singularity types, indexed by Milnor number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AdeKind {
    /// `A_k`, `k ≥ 1`.
    A(u32),
    /// `D_k`, `k ≥ 4`.
    D(u32),
    E6,
    E7,
    E8,
}

impl AdeKind {
    /// Number of branch multiplicities [`ade_invariants`] expects.
    pub fn arity(self) -> usize {
        match self {
            AdeKind::A(k) if k % 2 == 1 => 2,
            AdeKind::A(_) => 1,
            AdeKind::D(k) if k % 2 == 0 => 3,
            AdeKind::D(_) => 2,
            AdeKind::E6 | AdeKind::E8 => 1,
            AdeKind::E7 => 2,
        }
    }
}

impl fmt::Display for AdeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeKind::A(k) => write!(f, "A{k}"),
            AdeKind::D(k) => write!(f, "D{k}"),
            AdeKind::E6 => write!(f, "E6"),
            AdeKind::E7 => write!(f, "E7"),
            AdeKind::E8 => write!(f, "E8"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdeInvariants {
    pub mu: i64,
    pub alpha: i64,
    pub beta: Rational,
}

/// `μ`, `α`, `β` of an ADE curve singularity inside a fiber.
///
/// Branch multiplicities, in order:
/// * `A_{2k−1}`: `(n, m)`, the two smooth branches;
/// * `A_{2k}`: `(n)`, unused by `β = 3k/(2k+1)`;
/// * `D_{2k+2}`: `(n, m, l)`, with `n` the branch transverse to the other two;
/// * `D_{2k+3}`: `(n, m)`, with `n` the smooth branch and `m` the `A_{2k}` branch;
/// * `E6`, `E8`: `(n)`, unused;
/// * `E7`: `(n, m)`, with `n` the smooth branch and `m` the cusp.
pub fn ade_invariants(kind: AdeKind, branch_mults: &[i64]) -> Result<AdeInvariants> {
    if branch_mults.len() != kind.arity() {
        return Err(FiberError::InvalidArgument(format!(
            "{kind} takes {} branch multiplicities, got {}",
            kind.arity(),
            branch_mults.len()
        )));
    }
    if branch_mults.iter().any(|&x| x < 1) {
        return Err(FiberError::InvalidArgument("branch multiplicities must be positive".into()));
    }
    let b = branch_mults;
    let (mu, alpha, beta) = match kind {
        AdeKind::A(0) => return Err(FiberError::InvalidArgument("A_k needs k >= 1".into())),
        AdeKind::A(s) if s % 2 == 1 => {
            let k = (s as i64 + 1) / 2;
            let (n, m) = (b[0], b[1]);
            let beta = int(1) - ratio(1, k) + bracket(k * (n + m), n) + bracket(k * (n + m), m);
            (s as i64, k - 1, beta)
        }
        AdeKind::A(s) => {
            let k = s as i64 / 2;
            (s as i64, k, ratio(3 * k, 2 * k + 1))
        }
        AdeKind::D(s) if s < 4 => {
            return Err(FiberError::InvalidArgument(format!("D_k needs k >= 4, got {s}")))
        }
        AdeKind::D(s) if s % 2 == 0 => {
            let k = (s as i64 - 2) / 2;
            let (n, m, l) = (b[0], b[1], b[2]);
            let big = n + k * (m + l);
            let g = n.gcd(&(m + l));
            let beta = ratio(k * g * g, n * big) + bracket(big, m) + bracket(big, l);
            (s as i64, k, beta)
        }
        AdeKind::D(s) => {
            let k = (s as i64 - 3) / 2;
            let (n, m) = (b[0], b[1]);
            let t = (2 * k + 1) * m + n;
            let g = n.gcd(&(2 * m));
            let beta = ratio(1, 2) + bracket(m, 2 * t) + ratio((2 * k + 1) * g * g, 2 * n * t);
            (s as i64, k + 1, beta)
        }
        AdeKind::E6 => (6, 3, int(1)),
        AdeKind::E7 => {
            let (n, m) = (b[0], b[1]);
            let g1 = (3 * m).gcd(&n);
            let g2 = m.gcd(&(3 * n));
            let beta = ratio(1, 3) + ratio(2 * g1 * g1, 3 * n * (2 * m + n)) + ratio(g2 * g2, 3 * m * (2 * m + n));
            (7, 3, beta)
        }
        AdeKind::E8 => (8, 4, ratio(4, 5)),
    };
    Ok(AdeInvariants { mu, alpha, beta })
}
