//! Genus-1 singular fibers in normal-crossing models.

use std::fmt;
use std::str::FromStr;

use super::{CatalogEntry, Expected};
use crate::error::FiberError;
use crate::fiber::{FiberBuilder, FiberGraph};
use crate::rational::{int, ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaKind {
    /// Cycle of `b` rational curves (`b = 1`: nodal rational curve, `b = 0`: smooth).
    I(u32),
    /// `m·I_b`.
    MultipleI(u32, u32),
    I0Star,
    II,
    IIStar,
    III,
    IIIStar,
    IV,
    IVStar,
}

impl KodairaKind {
    /// Kinds shipped by [`super::all`].
    pub fn standard() -> Vec<KodairaKind> {
        use KodairaKind::*;
        vec![
            I(1),
            I(2),
            I(5),
            MultipleI(2, 0),
            MultipleI(3, 1),
            MultipleI(2, 3),
            I0Star,
            II,
            III,
            IV,
            IVStar,
            IIIStar,
            IIStar,
        ]
    }

    /// The Euler-number coefficient of the kind in the global count.
    pub fn euler(self) -> i64 {
        use KodairaKind::*;
        match self {
            I(_) | MultipleI(..) => 0,
            I0Star => 6,
            II => 2,
            IIStar => 10,
            III => 3,
            IIIStar => 9,
            IV => 4,
            IVStar => 8,
        }
    }
}

impl fmt::Display for KodairaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KodairaKind::*;
        match self {
            I(b) => write!(f, "I{b}"),
            MultipleI(m, b) => write!(f, "{m}I{b}"),
            I0Star => f.write_str("I0*"),
            II => f.write_str("II"),
            IIStar => f.write_str("II*"),
            III => f.write_str("III"),
            IIIStar => f.write_str("III*"),
            IV => f.write_str("IV"),
            IVStar => f.write_str("IV*"),
        }
    }
}

impl FromStr for KodairaKind {
    type Err = FiberError;

    fn from_str(s: &str) -> Result<Self, FiberError> {
        use KodairaKind::*;
        let bad = || FiberError::InvalidArgument(format!("unknown Kodaira kind `{s}`"));
        Ok(match s {
            "I0*" | "I*" => I0Star,
            "II" => II,
            "II*" => IIStar,
            "III" => III,
            "III*" => IIIStar,
            "IV" => IV,
            "IV*" => IVStar,
            _ => {
                let (m, b) = s.split_once('I').ok_or_else(bad)?;
                let b: u32 = b.parse().map_err(|_| bad())?;
                if m.is_empty() {
                    I(b)
                } else {
                    let m: u32 = m.parse().map_err(|_| bad())?;
                    if m < 2 {
                        return Err(bad());
                    }
                    MultipleI(m, b)
                }
            }
        })
    }
}

fn cycle(name: String, b: u32, m: i64) -> FiberGraph {
    let mut fb = FiberBuilder::new(name);
    match b {
        0 => fb = fb.component("e", m, Some(0), 1),
        1 => fb = fb.component("c0", m, Some(0), 0).node("c0", "c0", 1),
        2 => {
            fb = fb
                .component("c0", m, Some(-2), 0)
                .component("c1", m, Some(-2), 0)
                .node("c0", "c1", 2)
        }
        _ => {
            let ids: Vec<String> = (0..b).map(|i| format!("c{i}")).collect();
            for id in &ids {
                fb = fb.component(id.as_str(), m, Some(-2), 0);
            }
            let mut ring: Vec<&str> = ids.iter().map(String::as_str).collect();
            ring.push("c0");
            fb = fb.path(&ring);
        }
    }
    fb.genus_check(1).build().expect("cycle fibers are consistent")
}

/// Star with arms given as multiplicity runs outward from the centre.
fn star(name: String, centre: i64, arms: &[&[i64]]) -> FiberGraph {
    let mut fb = FiberBuilder::new(name).rational("z", centre);
    for (a, arm) in arms.iter().enumerate() {
        let mut prev = "z".to_string();
        for (i, &m) in arm.iter().enumerate() {
            let id = format!("a{a}{i}");
            fb = fb.rational(id.as_str(), m).node(prev.as_str(), id.as_str(), 1);
            prev = id;
        }
    }
    fb.genus_check(1).build().expect("star fibers are consistent")
}

fn graph(kind: KodairaKind) -> FiberGraph {
    use KodairaKind::*;
    let name = format!("kodaira/{kind}");
    match kind {
        I(b) => cycle(name, b, 1),
        MultipleI(m, b) => cycle(name, b, m as i64),
        I0Star => star(name, 2, &[&[1], &[1], &[1], &[1]]),
        IVStar => star(name, 3, &[&[2, 1], &[2, 1], &[2, 1]]),
        IIIStar => star(name, 4, &[&[3, 2, 1], &[3, 2, 1], &[2]]),
        IIStar => star(name, 6, &[&[5, 4, 3, 2, 1], &[4, 2], &[3]]),
        II => FiberBuilder::new(name)
            .component("c", 1, Some(-6), 0)
            .component("e1", 2, Some(-3), 0)
            .component("e2", 3, Some(-2), 0)
            .component("e3", 6, Some(-1), 0)
            .node("c", "e3", 1)
            .node("e1", "e3", 1)
            .node("e2", "e3", 1)
            .blowups(3)
            .genus_check(1)
            .build()
            .expect("II is consistent"),
        III => FiberBuilder::new(name)
            .component("a", 1, Some(-4), 0)
            .component("b", 1, Some(-4), 0)
            .component("e1", 2, Some(-2), 0)
            .component("e2", 4, Some(-1), 0)
            .node("a", "e2", 1)
            .node("b", "e2", 1)
            .node("e1", "e2", 1)
            .blowups(2)
            .genus_check(1)
            .build()
            .expect("III is consistent"),
        IV => FiberBuilder::new(name)
            .component("a", 1, Some(-3), 0)
            .component("b", 1, Some(-3), 0)
            .component("c", 1, Some(-3), 0)
            .component("e", 3, Some(-1), 0)
            .node("a", "e", 1)
            .node("b", "e", 1)
            .node("c", "e", 1)
            .blowups(1)
            .genus_check(1)
            .build()
            .expect("IV is consistent"),
    }
}

pub fn kodaira(kind: KodairaKind) -> CatalogEntry {
    let e = kind.euler();
    CatalogEntry {
        key: format!("kodaira/{kind}"),
        graph: graph(kind),
        expected: Expected::chern(1, int(0), int(e), ratio(e, 12)),
        provenance: "Kodaira fiber; c2 is its coefficient in the Euler-number count of an elliptic fibration".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::compute_invariants;

    #[test]
    fn euler_coefficients() {
        for kind in KodairaKind::standard() {
            let e = kodaira(kind);
            let b = compute_invariants(&e.graph).unwrap();
            assert_eq!(b.chern(), (int(0), int(kind.euler()), ratio(kind.euler(), 12)), "{kind}");
        }
        for b in 0..8 {
            for m in 2..5 {
                let e = kodaira(KodairaKind::MultipleI(m, b));
                let bundle = compute_invariants(&e.graph).unwrap();
                assert_eq!(bundle.chern(), (int(0), int(0), int(0)));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in KodairaKind::standard() {
            assert_eq!(kind.to_string().parse::<KodairaKind>().unwrap(), kind);
        }
        assert!("1I3".parse::<KodairaKind>().is_err());
        assert!("V".parse::<KodairaKind>().is_err());
    }
}
