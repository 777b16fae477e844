//! Decorated dual graphs of normal-crossing fiber models.
//!
//! A [`FiberGraph`] stores components (multiplicity, self-intersection,
//! geometric genus) and node edges between them. Loops are self-nodes.
//! Graphs built through [`FiberBuilder::build`] are connected, satisfy the
//! Zariski identity at every component and have genus at least 1.

mod format;
mod minimize;
mod validate;

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{FiberError, Result};

pub use format::{emit_fiber, emit_fiber_json, fiber_to_json, parse_fiber, parse_fiber_builder};
pub use minimize::{
    derive_resolution, is_minimal_nc, minimize, minimize_strict, relatively_minimal_blowups,
    Minimized,
};
pub use validate::{validate, Issue, IssueKind, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub id: String,
    pub mult: i64,
    pub self_int: i64,
    pub genus: i64,
}

/// `count` nodes between components `a <= b` (indices into the component list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeEdge {
    pub a: usize,
    pub b: usize,
    pub count: i64,
}

impl NodeEdge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

/// Multiplicities of the blown-up points, in blow-up order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ResolutionRecord {
    mults: Vec<i64>,
}

impl ResolutionRecord {
    pub fn new(mults: Vec<i64>) -> Result<Self> {
        if let Some(m) = mults.iter().find(|&&m| m < 2) {
            return Err(FiberError::Resolution(format!("entry {m} is below 2")));
        }
        Ok(ResolutionRecord { mults })
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// `α = Σ(mᵢ−2)²`.
    pub fn alpha(&self) -> i64 {
        self.mults.iter().map(|m| (m - 2) * (m - 2)).sum()
    }

    /// Drop in arithmetic genus of the reduced curve, `Σ(mᵢ−1)(mᵢ−2)/2`.
    pub fn genus_drop(&self) -> i64 {
        self.mults.iter().map(|m| (m - 1) * (m - 2) / 2).sum()
    }

    /// `Σ(mᵢ−1)²`, the gain in self-intersection of the reduced curve.
    pub fn square_gain(&self) -> i64 {
        self.mults.iter().map(|m| (m - 1) * (m - 1)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberGraph {
    name: String,
    components: Vec<Component>,
    nodes: Vec<NodeEdge>,
    blowups: u32,
    resolution: Option<ResolutionRecord>,
}

impl FiberGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[NodeEdge] {
        &self.nodes
    }

    pub fn blowups(&self) -> u32 {
        self.blowups
    }

    pub fn resolution(&self) -> Option<&ResolutionRecord> {
        self.resolution.as_ref()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces blow-up metadata. A record of the wrong length is rejected.
    pub fn with_blowups(mut self, r: u32, resolution: Option<ResolutionRecord>) -> Result<Self> {
        if let Some(rec) = &resolution {
            if rec.len() != r as usize {
                return Err(FiberError::Resolution(format!(
                    "record has {} entries but blowups = {r}",
                    rec.len()
                )));
            }
        }
        self.blowups = r;
        self.resolution = resolution;
        Ok(self)
    }

    /// Neighbours of every component as `(index, count)`, loops excluded.
    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.components.len()];
        for e in &self.nodes {
            if !e.is_loop() {
                adj[e.a].push((e.b, e.count));
                adj[e.b].push((e.a, e.count));
            }
        }
        adj
    }

    /// Self-node count per component.
    pub fn loops(&self) -> Vec<i64> {
        let mut l = vec![0; self.components.len()];
        for e in self.nodes.iter().filter(|e| e.is_loop()) {
            l[e.a] += e.count;
        }
        l
    }

    /// Node-points on each component; a self-node contributes two.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d = vec![0; self.components.len()];
        for e in &self.nodes {
            d[e.a] += e.count;
            d[e.b] += e.count;
        }
        d
    }

    /// Total number of nodes, `μ` of the NC model.
    pub fn node_count(&self) -> i64 {
        self.nodes.iter().map(|e| e.count).sum()
    }

    pub fn mults(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.mult).collect()
    }

    pub fn mult_gcd(&self) -> i64 {
        self.components.iter().fold(0, |g, c| g.gcd(&c.mult))
    }

    pub fn mult_lcm(&self) -> i64 {
        self.components.iter().fold(1, |l, c| l.lcm(&c.mult))
    }

    /// `Σ nᵢ K·Cᵢ = 2g − 2`.
    pub fn canonical_degree(&self) -> i64 {
        let loops = self.loops();
        self.components
            .iter()
            .zip(&loops)
            .map(|(c, l)| c.mult * (2 * (c.genus + l) - 2 - c.self_int))
            .sum()
    }

    /// The same graph with every multiplicity multiplied by `k`.
    pub fn scaled(&self, k: i64) -> FiberGraph {
        let mut f = self.clone();
        for c in &mut f.components {
            c.mult *= k;
        }
        f
    }

    /// Builds a graph from parts, skipping every numerical check.
    pub fn from_parts_unchecked(
        name: impl Into<String>,
        components: Vec<Component>,
        nodes: Vec<NodeEdge>,
        blowups: u32,
        resolution: Option<ResolutionRecord>,
    ) -> FiberGraph {
        FiberGraph {
            name: name.into(),
            components,
            nodes: normalize_nodes(nodes),
            blowups,
            resolution,
        }
    }

    /// Builds a graph from parts and runs the same checks as [`FiberBuilder::build`].
    pub fn from_parts(
        name: impl Into<String>,
        components: Vec<Component>,
        nodes: Vec<NodeEdge>,
        blowups: u32,
        resolution: Option<ResolutionRecord>,
    ) -> Result<FiberGraph> {
        let f = Self::from_parts_unchecked(name, components, nodes, blowups, resolution);
        check_structure(&f)?;
        Ok(f)
    }
}

/// Merges parallel edges, orients each as `a <= b` and sorts.
fn normalize_nodes(nodes: Vec<NodeEdge>) -> Vec<NodeEdge> {
    let mut merged: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for e in nodes {
        let key = (e.a.min(e.b), e.a.max(e.b));
        *merged.entry(key).or_default() += e.count;
    }
    merged
        .into_iter()
        .map(|((a, b), count)| NodeEdge { a, b, count })
        .collect()
}

/// Fiber genus from `2g − 2 = Σ nᵢ K·Cᵢ`.
pub fn fiber_genus(f: &FiberGraph) -> Result<i64> {
    let k = f.canonical_degree();
    if k % 2 != 0 || k < -2 {
        return Err(FiberError::NotAFiber(format!(
            "K·F = {k} does not give a genus"
        )));
    }
    Ok(k / 2 + 1)
}

/// Zariski residual `nᵢCᵢ² + Σ_{j≠i} nⱼ CᵢCⱼ` for every component.
pub(crate) fn zariski_residuals(f: &FiberGraph) -> Vec<i64> {
    let mut res: Vec<i64> = f.components.iter().map(|c| c.mult * c.self_int).collect();
    for e in f.nodes.iter().filter(|e| !e.is_loop()) {
        res[e.a] += f.components[e.b].mult * e.count;
        res[e.b] += f.components[e.a].mult * e.count;
    }
    res
}

/// First component unreachable from component 0, if any.
pub(crate) fn unreachable_component(f: &FiberGraph) -> Option<usize> {
    if f.components.is_empty() {
        return None;
    }
    let adj = f.adjacency();
    let mut seen = vec![false; f.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().position(|s| !s)
}

/// Checks enforced on every accepted graph.
fn check_structure(f: &FiberGraph) -> Result<()> {
    if f.components.is_empty() {
        return Err(FiberError::NotNumerical("no components".into()));
    }
    for c in &f.components {
        if c.mult < 1 {
            return Err(FiberError::InvalidComponent {
                component: c.id.clone(),
                message: format!("multiplicity {} is not positive", c.mult),
            });
        }
        if c.genus < 0 {
            return Err(FiberError::InvalidComponent {
                component: c.id.clone(),
                message: format!("genus {} is negative", c.genus),
            });
        }
    }
    for e in &f.nodes {
        if e.count < 1 {
            return Err(FiberError::ZeroCount {
                a: f.components[e.a].id.clone(),
                b: f.components[e.b].id.clone(),
            });
        }
    }
    if let Some(v) = unreachable_component(f) {
        return Err(FiberError::Disconnected(f.components[v].id.clone()));
    }
    for (i, r) in zariski_residuals(f).into_iter().enumerate() {
        if r != 0 {
            return Err(FiberError::Zariski {
                component: f.components[i].id.clone(),
                lhs: r,
            });
        }
    }
    if let Some(rec) = &f.resolution {
        if rec.len() != f.blowups as usize {
            return Err(FiberError::Resolution(format!(
                "record has {} entries but blowups = {}",
                rec.len(),
                f.blowups
            )));
        }
    }
    let g = fiber_genus(f)?;
    if g < 1 {
        return Err(FiberError::NotNumerical(format!("fiber genus {g} is below 1")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct PendingComponent {
    id: String,
    mult: i64,
    self_int: Option<i64>,
    genus: i64,
}

/// Incremental construction of a [`FiberGraph`] with optional self-intersections.
#[derive(Debug, Clone, Default)]
pub struct FiberBuilder {
    name: String,
    components: Vec<PendingComponent>,
    edges: Vec<(String, String, i64)>,
    blowups: u32,
    genus_check: Option<i64>,
    resolution: Option<Vec<i64>>,
}

impl FiberBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        FiberBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Adds a component; `self_int = None` means "solve from Zariski".
    pub fn component(mut self, id: impl Into<String>, mult: i64, self_int: Option<i64>, genus: i64) -> Self {
        self.components.push(PendingComponent {
            id: id.into(),
            mult,
            self_int,
            genus,
        });
        self
    }

    /// A rational component with solved self-intersection.
    pub fn rational(self, id: impl Into<String>, mult: i64) -> Self {
        self.component(id, mult, None, 0)
    }

    pub fn node(mut self, a: impl Into<String>, b: impl Into<String>, count: i64) -> Self {
        self.edges.push((a.into(), b.into(), count));
        self
    }

    /// Joins consecutive ids by single nodes.
    pub fn path(mut self, ids: &[&str]) -> Self {
        for w in ids.windows(2) {
            self = self.node(w[0], w[1], 1);
        }
        self
    }

    pub fn blowups(mut self, r: u32) -> Self {
        self.blowups = r;
        self
    }

    pub fn genus_check(mut self, g: i64) -> Self {
        self.genus_check = Some(g);
        self
    }

    pub fn resolution(mut self, mults: Vec<i64>) -> Self {
        self.resolution = Some(mults);
        self
    }

    /// Resolves ids and solves omitted self-intersections, without numerical checks.
    pub fn build_unchecked(self) -> Result<FiberGraph> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, c) in self.components.iter().enumerate() {
            if index.insert(c.id.as_str(), i).is_some() {
                return Err(FiberError::DuplicateComponent(c.id.clone()));
            }
            if c.mult < 1 {
                return Err(FiberError::InvalidComponent {
                    component: c.id.clone(),
                    message: format!("multiplicity {} is not positive", c.mult),
                });
            }
        }
        let mut nodes = Vec::with_capacity(self.edges.len());
        for (a, b, count) in &self.edges {
            let ia = *index.get(a.as_str()).ok_or_else(|| FiberError::UnknownComponent(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| FiberError::UnknownComponent(b.clone()))?;
            if *count < 1 {
                return Err(FiberError::ZeroCount {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            nodes.push(NodeEdge {
                a: ia,
                b: ib,
                count: *count,
            });
        }
        let nodes = normalize_nodes(nodes);
        let mut pull = vec![0i64; self.components.len()];
        for e in nodes.iter().filter(|e| !e.is_loop()) {
            pull[e.a] += self.components[e.b].mult * e.count;
            pull[e.b] += self.components[e.a].mult * e.count;
        }
        let mut components = Vec::with_capacity(self.components.len());
        for (c, p) in self.components.iter().zip(&pull) {
            let self_int = match c.self_int {
                Some(s) => s,
                None if p % c.mult == 0 => -p / c.mult,
                None => {
                    return Err(FiberError::NotNumerical(format!(
                        "self-intersection of `{}` solves to -{p}/{}",
                        c.id, c.mult
                    )))
                }
            };
            components.push(Component {
                id: c.id.clone(),
                mult: c.mult,
                self_int,
                genus: c.genus,
            });
        }
        let resolution = self.resolution.map(ResolutionRecord::new).transpose()?;
        Ok(FiberGraph {
            name: self.name,
            components,
            nodes,
            blowups: self.blowups,
            resolution,
        })
    }

    /// Builds and checks connectivity, Zariski, genus and the genus assertion.
    pub fn build(self) -> Result<FiberGraph> {
        let genus_check = self.genus_check;
        let f = self.build_unchecked()?;
        check_structure(&f)?;
        if let Some(declared) = genus_check {
            let computed = fiber_genus(&f)?;
            if declared != computed {
                return Err(FiberError::GenusMismatch { declared, computed });
            }
        }
        Ok(f)
    }
}
