//! Theorem-level inequality checks and matching against the catalog.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use crate::canon::canonical_form;
use crate::catalog::{theorem13_family, twentytwo, KodairaKind, THM13_FAMILIES};
use crate::error::{FiberError, Result};
use crate::fiber::{minimize, FiberGraph};
use crate::invariants::{compute_invariants, InvariantBundle};
use crate::rational::{fmt_exact, int, ratio, Rational};

/// Cap on `c₁²` for a fiber of genus `g`.
pub fn c1_upper_bound(g: i64) -> Result<Rational> {
    Ok(match g {
        i64::MIN..=1 => return Err(FiberError::InvalidArgument(format!("genus {g} < 2"))),
        2 => ratio(16, 5),
        3 => int(7),
        4 => ratio(54, 5),
        6 => ratio(130, 7),
        _ => int(4 * g) - ratio(11, 2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    /// `left ∈ {0} ∪ [right, ∞)`.
    #[serde(rename = "zero-or->=")]
    ZeroOrGe,
}

impl Relation {
    fn holds(self, l: &Rational, r: &Rational) -> bool {
        match self {
            Relation::Le => l <= r,
            Relation::Lt => l < r,
            Relation::Ge => l >= r,
            Relation::Eq => l == r,
            Relation::ZeroOrGe => l.is_zero() || l >= r,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::ZeroOrGe => "zero or >=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRecord {
    pub name: &'static str,
    pub left: Rational,
    pub relation: Relation,
    pub right: Rational,
    pub pass: bool,
    /// Set when the bound is attained, or when a structural side condition is reported.
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InequalityReport {
    pub records: Vec<InequalityRecord>,
    /// Checks that do not apply, with the reason.
    pub skipped: Vec<(&'static str, String)>,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    fn push(&mut self, name: &'static str, left: Rational, relation: Relation, right: Rational, equality: &str) {
        let pass = relation.holds(&left, &right);
        let note = if left == right && relation != Relation::Eq && !equality.is_empty() {
            format!("equality: {equality}")
        } else {
            String::new()
        };
        self.records.push(InequalityRecord {
            name,
            left,
            relation,
            right,
            pass,
            note,
        });
    }

    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|r| {
                serde_json::json!({
                    "name": r.name,
                    "left": fmt_exact(&r.left),
                    "relation": r.relation,
                    "right": fmt_exact(&r.right),
                    "pass": r.pass,
                    "note": r.note,
                })
            })
            .collect();
        let skipped: Vec<serde_json::Value> = self
            .skipped
            .iter()
            .map(|(n, why)| serde_json::json!({ "name": n, "reason": why }))
            .collect();
        serde_json::json!({ "records": records, "skipped": skipped, "pass": self.all_pass() })
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            let verdict = if r.pass { "ok" } else { "FAIL" };
            let (l, rt) = (fmt_exact(&r.left), fmt_exact(&r.right));
            match r.relation {
                Relation::ZeroOrGe => write!(f, "{verdict} {}: {l} in {{0}} u [{rt}, inf)", r.name)?,
                rel => write!(f, "{verdict} {}: {l} {rel} {rt}", r.name)?,
            }
            if !r.note.is_empty() {
                write!(f, " ({})", r.note)?;
            }
            writeln!(f)?;
        }
        for (n, why) in &self.skipped {
            writeln!(f, "skip {n}: {why}")?;
        }
        Ok(())
    }
}

/// Shape facts read off the minimized normal-crossing graph.
struct Shape {
    /// All multiplicities 1: the fiber is reduced nodal.
    semistable: bool,
    /// All multiplicities equal and no blow-ups: `F = nF_red` with `F_red` nodal.
    multiple_nodal: bool,
}

fn shape(m: &FiberGraph) -> Shape {
    let mults = m.mults();
    let all_equal = mults.iter().all(|&x| x == mults[0]);
    Shape {
        semistable: mults.iter().all(|&x| x == 1),
        multiple_nodal: all_equal && m.blowups() == 0,
    }
}

/// Evaluates every applicable bound exactly.
pub fn inequality_report(f: &FiberGraph) -> Result<InequalityReport> {
    let b = compute_invariants(f)?;
    let m = minimize(f)?.graph;
    Ok(report_for(&b, &shape(&m)))
}

fn report_for(b: &InvariantBundle, s: &Shape) -> InequalityReport {
    let mut rep = InequalityReport::default();
    let zero = int(0);
    let (c1, c2, chi) = b.chern();
    rep.push("positivity c1sq", c1.clone(), Relation::Ge, zero.clone(), "");
    rep.push("positivity c2", c2.clone(), Relation::Ge, zero.clone(), "");
    rep.push("positivity chi", chi.clone(), Relation::Ge, zero.clone(), "");
    rep.push("noether", &c1 + &c2, Relation::Eq, int(12) * &chi, "");
    if b.g < 2 {
        rep.skipped.push(("genus >= 2 bounds", format!("g = {}", b.g)));
        return rep;
    }
    let g = b.g;
    let vanishing = c1.is_zero() || c2.is_zero() || chi.is_zero();
    rep.push(
        "vanishing iff semistable",
        int(vanishing as i64),
        Relation::Eq,
        int(s.semistable as i64),
        "",
    );
    rep.push("canonical class", c1.clone(), Relation::Le, int(4 * g - 4), "");
    let my = c1 == int(2) * &c2;
    rep.push("miyaoka-yau", c1.clone(), Relation::Le, int(2) * &c2, "F = nF_red with F_red nodal");
    rep.push(
        "miyaoka-yau equality iff multiple nodal",
        int(my as i64),
        Relation::Eq,
        int(s.multiple_nodal as i64),
        "",
    );
    rep.push(
        "arakelov",
        chi.clone(),
        Relation::Le,
        ratio(5 * g, 6),
        "F* reduced with nodes and ordinary cusps, its normal-crossing model a rational tree",
    );
    rep.push(
        "chi >= N_bar/6",
        chi.clone(),
        Relation::Ge,
        ratio(b.n_bar, 6),
        "F reduced with at worst ordinary cusps and nodes",
    );
    rep.push(
        "chi <= 5 N_bar/6",
        chi.clone(),
        Relation::Le,
        ratio(5 * b.n_bar, 6),
        "F* reduced with at worst ordinary cusps and nodes",
    );
    if s.semistable {
        rep.skipped.push(("non-semistable lower bounds", "fiber is reduced nodal".into()));
    } else {
        let cusp = "F reduced with one ordinary cusp and nodes";
        rep.push("c2 >= 11/6", c2.clone(), Relation::Ge, ratio(11, 6), cusp);
        rep.push("chi >= 1/6", chi.clone(), Relation::Ge, ratio(1, 6), cusp);
    }
    let gap = b.gap();
    rep.push("gap 2c2 - c1sq", gap, Relation::ZeroOrGe, int(3), "");
    rep.push("c1sq <= 4g - 24/5", c1.clone(), Relation::Le, int(4 * g) - ratio(24, 5), "");
    let cap = c1_upper_bound(g).expect("g >= 2");
    let attained = if [2, 3, 4, 6].contains(&g) {
        "attained by a classified fiber"
    } else {
        "the multiple-fiber family (g - 1)F0 attains it"
    };
    rep.push("c1sq genus cap", c1, Relation::Le, cap, attained);
    rep
}

/// What [`classify_fiber`] recognised.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Classification {
    pub g: i64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub c1sq: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub gap: Rational,
    /// `c₁² > 4g − 11/2`.
    pub above_line: bool,
    /// Catalog key of the matching classified fiber, when above the line.
    pub theorem13: Option<String>,
    /// `thm1.4/case<k>` when `2c₂ − c₁² < 6`.
    pub theorem14: Option<String>,
    /// `kodaira/<kind>` for genus 1.
    pub kodaira: Option<String>,
    /// Failed expectations: a non-empty list means the transcription or the input is suspect.
    pub violations: Vec<String>,
}

pub const UNCLASSIFIED_14: &str = "unclassified: violates the 2c2 - c1^2 < 6 classification";
pub const UNCLASSIFIED_13: &str = "unclassified: violates the c1^2 > 4g - 11/2 classification";

impl Classification {
    /// The most specific label found.
    pub fn label(&self) -> String {
        self.theorem13
            .clone()
            .or_else(|| self.theorem14.clone())
            .or_else(|| self.kodaira.clone())
            .unwrap_or_else(|| "none".into())
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "g = {}", self.g)?;
        writeln!(f, "c1sq_min = {}", fmt_exact(&self.c1sq))?;
        writeln!(f, "gap = {}", fmt_exact(&self.gap))?;
        writeln!(f, "above_line = {}", self.above_line)?;
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
        writeln!(f, "thm1.3 = {}", opt(&self.theorem13))?;
        writeln!(f, "thm1.4 = {}", opt(&self.theorem14))?;
        writeln!(f, "kodaira = {}", opt(&self.kodaira))?;
        writeln!(f, "label = {}", self.label())
    }
}

/// Canonical labels of the 22 entries and of family members up to 24 vertices, with blow-up counts.
fn thm13_index() -> &'static HashMap<(String, u32), String> {
    static INDEX: OnceLock<HashMap<(String, u32), String>> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut idx = HashMap::new();
        let mut add = |g: &FiberGraph, key: String| {
            idx.entry((canonical_form(g), g.blowups())).or_insert(key);
        };
        for e in twentytwo() {
            add(&e.graph, e.key);
        }
        for &(entry, param, _) in &THM13_FAMILIES {
            for len in 1..=12 {
                let e = theorem13_family(entry, len).expect("family member");
                add(&e.graph, format!("thm1.3/{entry}/{param}={len}"));
            }
        }
        idx
    })
}

fn kodaira_kind(m: &FiberGraph) -> Option<KodairaKind> {
    let mults = m.mults();
    let k = mults[0];
    let loops = m.loops();
    let comps = m.components();
    let equal = mults.iter().all(|&x| x == k);
    if equal && m.blowups() == 0 {
        let b = m.len() as u32;
        let cyc = match b {
            1 if comps[0].genus == 1 && loops[0] == 0 => Some(0),
            1 if comps[0].genus == 0 && loops[0] == 1 => Some(1),
            _ => {
                let rational_twos = comps.iter().all(|c| c.genus == 0 && c.self_int == -2);
                let deg2 = m.degrees().iter().all(|&d| d == 2);
                (b >= 2 && rational_twos && deg2 && loops.iter().all(|&l| l == 0)).then_some(b)
            }
        };
        if let Some(b) = cyc {
            return Some(if k == 1 { KodairaKind::I(b) } else { KodairaKind::MultipleI(k as u32, b) });
        }
    }
    let label = (canonical_form(m), m.blowups());
    [
        KodairaKind::I0Star,
        KodairaKind::II,
        KodairaKind::IIStar,
        KodairaKind::III,
        KodairaKind::IIIStar,
        KodairaKind::IV,
        KodairaKind::IVStar,
    ]
    .into_iter()
    .find(|&kind| {
        let g = crate::catalog::kodaira(kind).graph;
        (canonical_form(&g), g.blowups()) == label
    })
}

struct Around {
    /// Neighbour index and edge count.
    nbrs: Vec<(usize, i64)>,
}

fn around(m: &FiberGraph, v: usize) -> Around {
    Around {
        nbrs: m.adjacency()[v].clone(),
    }
}

fn is_rational_leaf(m: &FiberGraph, v: usize, self_int: i64) -> bool {
    let c = &m.components()[v];
    c.genus == 0 && c.self_int == self_int && m.loops()[v] == 0 && m.degrees()[v] == 1
}

/// `C²` of the reduced curve formed by `set`.
fn reduced_square(m: &FiberGraph, set: &[bool]) -> i64 {
    let selfs: i64 = m.components().iter().enumerate().filter(|(i, _)| set[*i]).map(|(_, c)| c.self_int).sum();
    let inner: i64 = m
        .nodes()
        .iter()
        .filter(|e| !e.is_loop() && set[e.a] && set[e.b])
        .map(|e| e.count)
        .sum();
    selfs + 2 * inner
}

fn induced_components(m: &FiberGraph, set: &[bool]) -> Vec<Vec<usize>> {
    let adj = m.adjacency();
    let mut seen = vec![false; m.len()];
    let mut out = Vec::new();
    for s in 0..m.len() {
        if !set[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(w, _) in &adj[comp[i]] {
                if set[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

/// The small-gap case whose exceptional pattern `m` shows, if any.
fn theorem14_case(m: &FiberGraph) -> Option<u32> {
    let mults = m.mults();
    let comps = m.components();
    let n = *mults.iter().min()?;
    let r = m.blowups();
    let minus_one = |k: i64| -> Vec<usize> {
        (0..m.len())
            .filter(|&v| mults[v] == k * n && comps[v].self_int == -1 && comps[v].genus == 0 && m.loops()[v] == 0)
            .collect()
    };
    let others_in = |skip: &[usize], allowed: &[i64]| {
        (0..m.len()).all(|v| skip.contains(&v) || allowed.iter().any(|&k| mults[v] == k * n))
    };
    match r {
        0 => {
            if mults.iter().all(|&x| x == n) {
                return Some(1);
            }
            if !mults.iter().all(|&x| x == n || x == 2 * n) {
                return None;
            }
            let in_a: Vec<bool> = mults.iter().map(|&x| x == n).collect();
            let in_b: Vec<bool> = in_a.iter().map(|&a| !a).collect();
            let cross: i64 = m.nodes().iter().filter(|e| in_a[e.a] != in_a[e.b]).map(|e| e.count).sum();
            if cross != 2 || reduced_square(m, &in_b) != -1 || reduced_square(m, &in_a) != -4 {
                return None;
            }
            let parts = induced_components(m, &in_a);
            let minus_two_part = parts.iter().any(|p| {
                let c = &comps[p[0]];
                p.len() == 1 && c.genus == 0 && c.self_int == -2 && m.loops()[p[0]] == 0
            });
            match (parts.len(), minus_two_part) {
                (1 | 2, false) => Some(6),
                (2, true) => Some(7),
                _ => None,
            }
        }
        1 => {
            let [e] = minus_one(3)[..] else { return None };
            let a = around(m, e);
            let total: i64 = a.nbrs.iter().map(|&(_, k)| k).sum();
            (total == 3 && a.nbrs.iter().all(|&(w, _)| mults[w] == n) && others_in(&[e], &[1])).then_some(5)
        }
        2 => {
            if let [e] = minus_one(4)[..] {
                let a = around(m, e);
                let tail: Vec<usize> = a.nbrs.iter().filter(|&&(w, _)| mults[w] == 2 * n).map(|&(w, _)| w).collect();
                let [t] = tail[..] else { return None };
                if !is_rational_leaf(m, t, -2) || !others_in(&[e, t], &[1]) {
                    return None;
                }
                let branches: Vec<(usize, i64)> = a.nbrs.iter().copied().filter(|&(w, _)| w != t).collect();
                return match branches[..] {
                    [(_, 2)] => Some(3),
                    [(u, 1), (w, 1)] => {
                        let minus_two = |v: usize| {
                            let c = &comps[v];
                            c.genus == 0 && c.self_int == -4 && m.loops()[v] == 0
                        };
                        Some(if minus_two(u) || minus_two(w) { 4 } else { 3 })
                    }
                    _ => None,
                };
            }
            let [e] = minus_one(6)[..] else { return None };
            let a = around(m, e);
            let mut ks: Vec<i64> = a.nbrs.iter().map(|&(w, k)| if k == 1 { mults[w] / n } else { 0 }).collect();
            ks.sort_unstable();
            if ks != [1, 2, 3] {
                return None;
            }
            let t = a.nbrs.iter().find(|&&(w, _)| mults[w] == 3 * n).map(|&(w, _)| w)?;
            (is_rational_leaf(m, t, -2) && others_in(&[e, t], &[1, 2])).then_some(8)
        }
        3 => {
            let [e] = minus_one(6)[..] else { return None };
            let a = around(m, e);
            let mut ks: Vec<i64> = a.nbrs.iter().map(|&(w, k)| if k == 1 { mults[w] / n } else { 0 }).collect();
            ks.sort_unstable();
            if ks != [1, 2, 3] {
                return None;
            }
            let leaf = |k: i64, s: i64| {
                a.nbrs.iter().any(|&(w, _)| mults[w] == k * n && is_rational_leaf(m, w, s))
            };
            let rest: Vec<usize> = a.nbrs.iter().filter(|&&(w, _)| mults[w] != n).map(|&(w, _)| w).collect();
            let mut skip = rest.clone();
            skip.push(e);
            (leaf(2, -3) && leaf(3, -2) && others_in(&skip, &[1])).then_some(2)
        }
        _ => None,
    }
}

/// Matches `f` against the classifications that apply to it.
pub fn classify_fiber(f: &FiberGraph) -> Result<Classification> {
    let b = compute_invariants(f)?;
    let m = minimize(f)?.graph;
    let mut out = Classification {
        g: b.g,
        c1sq: b.c1sq_min.clone(),
        gap: b.gap(),
        ..Default::default()
    };
    if b.g == 1 {
        out.kodaira = kodaira_kind(&m).map(|k| format!("kodaira/{k}"));
        return Ok(out);
    }
    if b.g < 1 {
        return Err(FiberError::InvalidArgument(format!("genus {} has no classification", b.g)));
    }
    out.above_line = b.c1sq_min > int(4 * b.g) - ratio(11, 2);
    if out.above_line {
        if b.g > 6 {
            out.violations.push(format!("c1^2 above 4g - 11/2 with g = {} > 6", b.g));
        }
        match thm13_index().get(&(canonical_form(&m), m.blowups())) {
            Some(key) => out.theorem13 = Some(key.clone()),
            None => {
                out.theorem13 = Some(UNCLASSIFIED_13.into());
                out.violations.push("no classified fiber matches".into());
            }
        }
    }
    if b.gap() < int(6) {
        match theorem14_case(&m) {
            Some(c) => out.theorem14 = Some(format!("thm1.4/case{c}")),
            None => {
                out.theorem14 = Some(UNCLASSIFIED_14.into());
                out.violations.push("no small-gap case matches".into());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{all, example_family, kodaira, lookup, theorem14_family};
    use crate::fiber::FiberBuilder;

    #[test]
    fn caps() {
        assert_eq!(c1_upper_bound(4).unwrap(), ratio(54, 5));
        assert_eq!(c1_upper_bound(6).unwrap(), ratio(130, 7));
        assert_eq!(c1_upper_bound(9).unwrap(), ratio(61, 2));
        assert_eq!(c1_upper_bound(5).unwrap(), ratio(29, 2));
        assert!(c1_upper_bound(1).is_err());
    }

    #[test]
    fn catalog_passes_everything() {
        for e in all() {
            let rep = inequality_report(&e.graph).unwrap();
            assert!(rep.all_pass(), "{}:\n{rep}", e.key);
        }
        let rep = inequality_report(&lookup("thm1.3/1").unwrap().graph).unwrap();
        let cap = rep.records.iter().find(|r| r.name == "c1sq genus cap").unwrap();
        assert_eq!(cap.left, ratio(130, 7));
        assert!(cap.note.starts_with("equality"));
    }

    #[test]
    fn reduced_nodal_is_zero_and_skips() {
        let f = FiberBuilder::new("nodal")
            .component("a", 1, None, 1)
            .component("b", 1, None, 1)
            .node("a", "b", 1)
            .build()
            .unwrap();
        let b = compute_invariants(&f).unwrap();
        assert_eq!(b.chern(), (int(0), int(0), int(0)));
        let rep = inequality_report(&f).unwrap();
        assert!(rep.all_pass(), "{rep}");
        assert!(rep.skipped.iter().any(|(n, _)| *n == "non-semistable lower bounds"));
    }

    #[test]
    fn cusp_witness_hits_lower_bounds() {
        let rep = inequality_report(&theorem14_family(2, 1, Some(1)).unwrap().graph).unwrap();
        for name in ["c2 >= 11/6", "chi >= 1/6"] {
            let r = rep.records.iter().find(|r| r.name == name).unwrap();
            assert!(r.pass && r.note.starts_with("equality"), "{name}");
        }
    }

    #[test]
    fn violated_bound_is_reported() {
        let mut b = compute_invariants(&lookup("thm1.3/9").unwrap().graph).unwrap();
        b.c1sq_min = int(100);
        let rep = report_for(&b, &Shape { semistable: false, multiple_nodal: false });
        let fails: Vec<&str> = rep.failures().map(|r| r.name).collect();
        assert!(fails.contains(&"canonical class"));
        assert!(fails.contains(&"c1sq genus cap"));
    }

    #[test]
    fn self_identification() {
        for e in crate::catalog::twentytwo() {
            let c = classify_fiber(&e.graph).unwrap();
            assert_eq!(c.theorem13.as_deref(), Some(e.key.as_str()));
            assert!(c.violations.is_empty());
        }
        for &(entry, param, _) in &THM13_FAMILIES {
            let e = theorem13_family(entry, 5).unwrap();
            assert_eq!(classify_fiber(&e.graph).unwrap().theorem13, Some(format!("thm1.3/{entry}/{param}=5")));
        }
    }

    #[test]
    fn theorem14_cases_recognised() {
        for case in 1..=8 {
            for n in 1..=3 {
                for h in 0..=2 {
                    let Ok(e) = theorem14_family(case, n, Some(h)) else { continue };
                    let c = classify_fiber(&e.graph).unwrap();
                    assert_eq!(c.theorem14, Some(format!("thm1.4/case{case}")), "{}", e.key);
                }
            }
        }
        let smooth = FiberBuilder::new("3C").component("c", 3, Some(0), 2).build().unwrap();
        assert_eq!(classify_fiber(&smooth).unwrap().label(), "thm1.4/case1");
    }

    #[test]
    fn boundary_example_not_above_line() {
        let c = classify_fiber(&example_family(3).unwrap().graph).unwrap();
        assert!(!c.above_line);
        assert_eq!(c.theorem13, None);
        assert_eq!(c.c1sq, ratio(13, 2));
    }

    #[test]
    fn kodaira_lookup() {
        for kind in KodairaKind::standard() {
            let c = classify_fiber(&kodaira(kind).graph).unwrap();
            assert_eq!(c.kodaira, Some(format!("kodaira/{kind}")));
        }
    }

    #[test]
    fn entry_21() {
        assert_eq!(classify_fiber(&lookup("thm1.3/21").unwrap().graph).unwrap().label(), "thm1.3/21");
    }
}
