use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{fiber_genus, relatively_minimal_blowups, unreachable_component, zariski_residuals, FiberGraph};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    Empty,
    Multiplicity,
    Genus,
    NodeCount,
    Disconnected,
    Zariski,
    SelfIntersection,
    FiberGenus,
    NotSemidefinite,
    Radical,
    Resolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub kind: IssueKind,
    /// Offending component id, or `a-b` for an edge.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    /// Primitive generator of the radical of the intersection matrix, when one-dimensional.
    pub radical: Option<Vec<i64>>,
    /// Informational remarks that do not invalidate the graph.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Runs every structural and numerical check and collects all failures.
pub fn validate(f: &FiberGraph) -> ValidationReport {
    let mut issues = Vec::new();
    let mut notes = Vec::new();
    let comps = f.components();
    let issue = |kind, subject: &str, message: String| Issue {
        kind,
        subject: subject.to_string(),
        message,
    };
    if comps.is_empty() {
        issues.push(issue(IssueKind::Empty, "fiber", "no components".into()));
        return ValidationReport {
            issues,
            radical: None,
            notes,
        };
    }
    for c in comps {
        if c.mult < 1 {
            issues.push(issue(IssueKind::Multiplicity, &c.id, format!("multiplicity {} is not positive", c.mult)));
        }
        if c.genus < 0 {
            issues.push(issue(IssueKind::Genus, &c.id, format!("genus {} is negative", c.genus)));
        }
        if comps.len() > 1 && c.self_int > 0 {
            issues.push(issue(
                IssueKind::SelfIntersection,
                &c.id,
                format!("self-intersection {} is positive", c.self_int),
            ));
        }
    }
    for e in f.nodes() {
        if e.count < 1 {
            issues.push(issue(
                IssueKind::NodeCount,
                &format!("{}-{}", comps[e.a].id, comps[e.b].id),
                format!("node count {} is not positive", e.count),
            ));
        }
    }
    if let Some(v) = unreachable_component(f) {
        issues.push(issue(IssueKind::Disconnected, &comps[v].id, "not reachable from the first component".into()));
    }
    for (i, r) in zariski_residuals(f).into_iter().enumerate() {
        if r != 0 {
            issues.push(issue(
                IssueKind::Zariski,
                &comps[i].id,
                format!("n*self + sum of neighbour multiplicities = {r}, expected 0"),
            ));
        }
    }
    match fiber_genus(f) {
        Ok(g) if g < 1 => issues.push(issue(IssueKind::FiberGenus, "fiber", format!("fiber genus {g} is below 1"))),
        Ok(_) => {}
        Err(e) => issues.push(issue(IssueKind::FiberGenus, "fiber", e.to_string())),
    }
    if let Some(rec) = f.resolution() {
        if rec.len() != f.blowups() as usize {
            issues.push(issue(
                IssueKind::Resolution,
                "fiber",
                format!("record has {} entries but blowups = {}", rec.len(), f.blowups()),
            ));
        }
    }

    let mut radical = None;
    if comps.iter().all(|c| c.mult >= 1) {
        let (psd, nullity, witness) = semidefinite_nullity(f);
        if !psd {
            let who = witness.map(|i| comps[i].id.clone()).unwrap_or_else(|| "fiber".into());
            issues.push(issue(
                IssueKind::NotSemidefinite,
                &who,
                "intersection matrix is not negative semidefinite".into(),
            ));
        } else if nullity != 1 {
            issues.push(issue(
                IssueKind::Radical,
                "fiber",
                format!("radical of the intersection matrix has dimension {nullity}, expected 1"),
            ));
        } else if issues.iter().all(|i| i.kind != IssueKind::Zariski) {
            let g = f.mult_gcd();
            radical = Some(comps.iter().map(|c| c.mult / g).collect());
        }
    }

    if issues.is_empty() {
        let r = relatively_minimal_blowups(f);
        if r != f.blowups() {
            notes.push(format!(
                "blowups = {} but contracting smooth rational (-1)-curves takes {r} steps",
                f.blowups()
            ));
        }
    }
    ValidationReport {
        issues,
        radical,
        notes,
    }
}

/// Symmetric elimination of `-M` in minimum-degree order.
///
/// Returns `(is_psd, nullity, failing vertex)`; exact over the rationals.
fn semidefinite_nullity(f: &FiberGraph) -> (bool, usize, Option<usize>) {
    let n = f.len();
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for (i, c) in f.components().iter().enumerate() {
        rows[i].insert(i, int(-c.self_int));
    }
    for e in f.nodes().iter().filter(|e| !e.is_loop()) {
        *rows[e.a].entry(e.b).or_insert_with(Rational::zero) -= int(e.count);
        *rows[e.b].entry(e.a).or_insert_with(Rational::zero) -= int(e.count);
    }
    let mut alive = vec![true; n];
    let mut nullity = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| rows[i].len())
            .expect("alive vertex");
        alive[v] = false;
        let row = std::mem::take(&mut rows[v]);
        let d = row.get(&v).cloned().unwrap_or_else(Rational::zero);
        let off: Vec<(usize, Rational)> = row
            .into_iter()
            .filter(|(j, x)| *j != v && !x.is_zero())
            .collect();
        for (j, _) in &off {
            rows[*j].remove(&v);
        }
        if d.is_negative() {
            return (false, nullity, Some(v));
        }
        if d.is_zero() {
            if !off.is_empty() {
                return (false, nullity, Some(v));
            }
            nullity += 1;
            continue;
        }
        for (i, a) in &off {
            for (j, b) in &off {
                let delta = a * b / &d;
                let entry = rows[*i].entry(*j).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() && i != j {
                    rows[*i].remove(j);
                }
            }
        }
    }
    (true, nullity, None)
}
