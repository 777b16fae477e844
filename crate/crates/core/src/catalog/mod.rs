//! Shipped fibers with their expected invariants.
//!
//! Keys:
//!
//! ```text
//! thm1.3/<1..22>            classified fibers above the 4g − 11/2 line
//! thm1.3/10/m=<m>           entry 10 with m mult-6 curves (m ≥ 1)
//! thm1.3/<14|15|16|19>/k=<k> those entries with k mult-2 (−2)-curves (k ≥ 1)
//! thm1.4/case<c>[/n=<n>,h=<h>]  witnesses for 2c₂ − c₁² < 6
//! example1.6/g=<g>          (g − 1)·F₀, on the line c₁² = 4g − 11/2
//! kodaira/<kind>            I<b>, <m>I<b>, I0*, II, III, IV and starred
//! ```

mod kodaira;
mod witnesses;

use std::fmt;

use serde::Serialize;

use crate::error::{FiberError, Result};
use crate::fiber::{parse_fiber, FiberBuilder, FiberGraph};
use crate::invariants::InvariantBundle;
use crate::rational::{fmt_exact, int, ratio, Rational};

pub use kodaira::{kodaira, KodairaKind};
pub use witnesses::{example_family, theorem14_family, theorem14_offsets};

/// Exact values a computed bundle must reproduce. Names are bundle fields.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expected(pub Vec<(&'static str, Rational)>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub field: String,
    pub expected: String,
    pub computed: String,
}

impl Expected {
    pub fn chern(g: i64, c1sq: Rational, c2: Rational, chi: Rational) -> Expected {
        Expected(vec![("g", int(g)), ("c1sq_min", c1sq), ("c2_min", c2), ("chi", chi)])
    }

    pub fn with(mut self, field: &'static str, value: Rational) -> Expected {
        self.0.push((field, value));
        self
    }

    pub fn get(&self, field: &str) -> Option<&Rational> {
        self.0.iter().find(|(k, _)| *k == field).map(|(_, v)| v)
    }

    pub fn mismatches(&self, b: &InvariantBundle) -> Vec<Mismatch> {
        self.0
            .iter()
            .filter_map(|(k, want)| {
                let got = b.get(k)?;
                (got != *want).then(|| Mismatch {
                    field: k.to_string(),
                    expected: fmt_exact(want),
                    computed: fmt_exact(&got),
                })
            })
            .collect()
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k} = {}", fmt_exact(v))).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: String,
    pub graph: FiberGraph,
    pub expected: Expected,
    pub provenance: String,
}

const THM13_FILES: [&str; 22] = [
    include_str!("data/thm13_01.fib"),
    include_str!("data/thm13_02.fib"),
    include_str!("data/thm13_03.fib"),
    include_str!("data/thm13_04.fib"),
    include_str!("data/thm13_05.fib"),
    include_str!("data/thm13_06.fib"),
    include_str!("data/thm13_07.fib"),
    include_str!("data/thm13_08.fib"),
    include_str!("data/thm13_09.fib"),
    include_str!("data/thm13_10.fib"),
    include_str!("data/thm13_11.fib"),
    include_str!("data/thm13_12.fib"),
    include_str!("data/thm13_13.fib"),
    include_str!("data/thm13_14.fib"),
    include_str!("data/thm13_15.fib"),
    include_str!("data/thm13_16.fib"),
    include_str!("data/thm13_17.fib"),
    include_str!("data/thm13_18.fib"),
    include_str!("data/thm13_19.fib"),
    include_str!("data/thm13_20.fib"),
    include_str!("data/thm13_21.fib"),
    include_str!("data/thm13_22.fib"),
];

/// A fraction as `(numerator, denominator)`.
type Frac = (i64, i64);

/// `(g, c₁², c₂, χ)` per entry, as tabulated.
const THM13_TABLE: [(i64, Frac, Frac, Frac); 22] = [
    (6, (130, 7), (30, 1), (85, 21)),
    (4, (54, 5), (26, 1), (46, 15)),
    (3, (7, 1), (21, 1), (7, 3)),
    (3, (48, 7), (18, 1), (29, 14)),
    (3, (98, 15), (268, 15), (61, 30)),
    (3, (20, 3), (20, 1), (20, 9)),
    (2, (16, 5), (16, 1), (8, 5)),
    (2, (3, 1), (15, 1), (3, 2)),
    (2, (3, 1), (15, 1), (3, 2)),
    (2, (3, 1), (9, 1), (1, 1)),
    (2, (8, 3), (34, 3), (7, 6)),
    (2, (11, 4), (49, 4), (5, 4)),
    (2, (17, 6), (79, 6), (4, 3)),
    (2, (8, 3), (34, 3), (7, 6)),
    (2, (11, 4), (49, 4), (5, 4)),
    (2, (17, 6), (79, 6), (4, 3)),
    (2, (14, 5), (14, 1), (7, 5)),
    (2, (8, 3), (40, 3), (4, 3)),
    (2, (8, 3), (40, 3), (4, 3)),
    (2, (8, 3), (52, 3), (5, 3)),
    (2, (13, 5), (7, 1), (4, 5)),
    (2, (31, 12), (197, 12), (19, 12)),
];

/// Entries with a repeatable run of equal-multiplicity (−2)-curves, with the drawn length.
pub const THM13_FAMILIES: [(usize, &str, usize); 5] = [(10, "m", 3), (14, "k", 2), (15, "k", 2), (16, "k", 2), (19, "k", 2)];

fn thm13_expected(entry: usize) -> Expected {
    let (g, c1, c2, chi) = THM13_TABLE[entry - 1];
    Expected::chern(g, ratio(c1.0, c1.1), ratio(c2.0, c2.1), ratio(chi.0, chi.1))
}

fn thm13_provenance(entry: usize) -> String {
    format!("classification of fibers with c1^2 > 4g - 11/2, diagram {entry}; expected values from its Chern table")
}

/// One of the 22 classified fibers, at the drawn length.
pub fn theorem13(entry: usize) -> Result<CatalogEntry> {
    if !(1..=22).contains(&entry) {
        return Err(FiberError::InvalidArgument(format!("entry {entry} is not in 1..=22")));
    }
    let graph = parse_fiber(THM13_FILES[entry - 1])?;
    Ok(CatalogEntry {
        key: format!("thm1.3/{entry}"),
        graph,
        expected: thm13_expected(entry),
        provenance: thm13_provenance(entry),
    })
}

/// The 22 classified fibers.
pub fn twentytwo() -> Vec<CatalogEntry> {
    (1..=22).map(|e| theorem13(e).expect("shipped data parses")).collect()
}

/// Entry 10 with `len` mult-6 curves, or entry 14/15/16/19 with `len` mult-2 curves.
pub fn theorem13_family(entry: usize, len: usize) -> Result<CatalogEntry> {
    let Some(&(_, param, _)) = THM13_FAMILIES.iter().find(|f| f.0 == entry) else {
        return Err(FiberError::InvalidArgument(format!("entry {entry} has no length parameter")));
    };
    if len == 0 {
        return Err(FiberError::InvalidArgument(format!("{param} must be at least 1")));
    }
    let b = FiberBuilder::new(format!("thm1.3/{entry}/{param}={len}")).genus_check(2);
    let b = if entry == 10 {
        let mut b = b.component("a", 3, Some(-2), 0).component("t", 3, Some(-2), 0);
        let sixes: Vec<String> = (0..len).map(|i| format!("s{i}")).collect();
        for s in &sixes {
            b = b.component(s.as_str(), 6, Some(-2), 0);
        }
        let mut ids: Vec<&str> = vec!["a"];
        ids.extend(sixes.iter().map(String::as_str));
        ids.extend(["u4", "u2"]);
        b.component("u4", 4, Some(-2), 0)
            .component("u2", 2, Some(-2), 0)
            .component("x", 2, Some(-3), 0)
            .path(&ids)
            .node("s0", "t", 1)
            .node(sixes[len - 1].as_str(), "x", 1)
    } else {
        let tail: &[(i64, Option<usize>)] = match entry {
            // (mult, index of the tail vertex it hangs from)
            14 => &[(4, None), (6, None), (4, None), (2, None), (4, Some(1)), (2, Some(4))],
            15 => &[(4, None), (6, None), (8, None), (6, None), (4, None), (2, None), (4, Some(2))],
            16 => &[(4, None), (6, None), (8, None), (10, None), (12, None), (8, None), (4, None), (6, Some(4))],
            19 => &[(4, None), (6, None), (5, None), (4, None), (3, None), (2, None), (1, None), (3, Some(1))],
            _ => unreachable!(),
        };
        let mut b = b.component("leaf", 1, Some(-2), 0).component("end", 1, Some(-2), 0);
        let twos: Vec<String> = (0..len).map(|i| format!("d{i}")).collect();
        for d in &twos {
            b = b.component(d.as_str(), 2, Some(-2), 0);
        }
        b = b.component("x", 2, Some(-3), 0);
        let mut spine: Vec<String> = vec!["end".into()];
        spine.extend(twos.iter().cloned());
        spine.push("x".into());
        let tail_ids: Vec<String> = (0..tail.len()).map(|i| format!("t{i}")).collect();
        for (i, &(m, hang)) in tail.iter().enumerate() {
            b = b.component(tail_ids[i].as_str(), m, Some(-2), 0);
            match hang {
                None => spine.push(tail_ids[i].clone()),
                Some(p) => b = b.node(tail_ids[p].as_str(), tail_ids[i].as_str(), 1),
            }
        }
        let refs: Vec<&str> = spine.iter().map(String::as_str).collect();
        b.path(&refs).node("d0", "leaf", 1)
    };
    Ok(CatalogEntry {
        key: format!("thm1.3/{entry}/{param}={len}"),
        graph: b.build()?,
        expected: thm13_expected(entry),
        provenance: thm13_provenance(entry),
    })
}

/// Default witnesses and sample members of every family.
pub fn all() -> Vec<CatalogEntry> {
    let mut out = twentytwo();
    out.extend(KodairaKind::standard().into_iter().map(kodaira));
    for g in 2..=6 {
        out.push(example_family(g).expect("g >= 2"));
    }
    for case in 1..=8 {
        out.push(theorem14_family(case, 1, None).expect("default witness"));
    }
    out
}

fn parse_kv(s: &str) -> Option<Vec<(&str, i64)>> {
    s.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=')?;
            Some((k.trim(), v.trim().parse().ok()?))
        })
        .collect()
}

/// Resolves a key, including parameterised ones.
pub fn lookup(key: &str) -> Result<CatalogEntry> {
    let unknown = || FiberError::InvalidArgument(format!("unknown catalog key `{key}`"));
    let parts: Vec<&str> = key.split('/').collect();
    match parts.as_slice() {
        ["thm1.3", e] => theorem13(e.parse().map_err(|_| unknown())?),
        ["thm1.3", e, kv] => {
            let entry: usize = e.parse().map_err(|_| unknown())?;
            let kv = parse_kv(kv).ok_or_else(unknown)?;
            let fam = THM13_FAMILIES.iter().find(|f| f.0 == entry).ok_or_else(unknown)?;
            match kv.as_slice() {
                [(p, len)] if *p == fam.1 && *len >= 0 => theorem13_family(entry, *len as usize),
                _ => Err(unknown()),
            }
        }
        ["thm1.4", case] | ["thm1.4", case, _] => {
            let case: u32 = case.strip_prefix("case").and_then(|c| c.parse().ok()).ok_or_else(unknown)?;
            let (mut n, mut h) = (1, None);
            if let Some(kv) = parts.get(2) {
                for (k, v) in parse_kv(kv).ok_or_else(unknown)? {
                    match k {
                        "n" => n = v,
                        "h" => h = Some(v),
                        _ => return Err(unknown()),
                    }
                }
            }
            theorem14_family(case, n, h)
        }
        ["example1.6", kv] => match parse_kv(kv).as_deref() {
            Some([("g", g)]) => example_family(*g),
            _ => Err(unknown()),
        },
        ["kodaira", kind] => Ok(kodaira(kind.parse()?)),
        _ => Err(unknown()),
    }
}

/// Every shipped key in listing order.
pub fn keys() -> Vec<String> {
    all().into_iter().map(|e| e.key).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::fiber::{fiber_genus, is_minimal_nc, validate};
    use crate::invariants::compute_invariants;

    #[test]
    fn twentytwo_reproduces_table() {
        for e in twentytwo() {
            let b = compute_invariants(&e.graph).unwrap();
            assert!(e.expected.mismatches(&b).is_empty(), "{}: {:?}", e.key, e.expected.mismatches(&b));
        }
    }

    #[test]
    fn entry_examples() {
        let e9 = theorem13(9).unwrap();
        assert_eq!(e9.graph.mults(), vec![1, 2, 5, 8, 7, 6, 5, 4, 3, 2, 1, 4]);
        let b = compute_invariants(&theorem13(21).unwrap().graph).unwrap();
        assert_eq!((b.c1sq_bar.clone(), b.c2_bar.clone()), (ratio(3, 5), int(9)));
        assert_eq!(b.chern(), (ratio(13, 5), int(7), ratio(4, 5)));
        let b = compute_invariants(&theorem13(1).unwrap().graph).unwrap();
        assert_eq!(b.chern(), (ratio(130, 7), int(30), ratio(85, 21)));
    }

    #[test]
    fn all_entries_valid_minimal_and_distinct() {
        let mut labels = Vec::new();
        for e in all() {
            assert!(validate(&e.graph).is_valid(), "{}", e.key);
            assert!(is_minimal_nc(&e.graph), "{}", e.key);
            let b = compute_invariants(&e.graph).unwrap();
            assert!(e.expected.mismatches(&b).is_empty(), "{}: {:?}", e.key, e.expected.mismatches(&b));
            labels.push(canonical_form(&e.graph));
        }
        let mut l22: Vec<String> = labels[..22].to_vec();
        l22.sort();
        l22.dedup();
        assert_eq!(l22.len(), 22);
    }

    #[test]
    fn families_match_drawn_files_and_do_not_move_invariants() {
        for &(entry, _, drawn) in &THM13_FAMILIES {
            let file = theorem13(entry).unwrap();
            let gen = theorem13_family(entry, drawn).unwrap();
            assert_eq!(canonical_form(&gen.graph), canonical_form(&file.graph), "entry {entry}");
            for len in 1..=6 {
                let f = theorem13_family(entry, len).unwrap();
                let b = compute_invariants(&f.graph).unwrap();
                assert!(f.expected.mismatches(&b).is_empty(), "entry {entry} len {len}");
                assert_eq!(fiber_genus(&f.graph).unwrap(), 2);
            }
        }
        assert!(theorem13_family(10, 0).is_err());
        assert!(theorem13_family(9, 2).is_err());
    }

    #[test]
    fn above_the_line_and_genus_bound() {
        for e in twentytwo() {
            let b = compute_invariants(&e.graph).unwrap();
            assert!(b.c1sq_min > int(4 * b.g) - ratio(11, 2), "{}", e.key);
            assert!(b.g <= 6);
        }
    }

    #[test]
    fn lookup_round_trips() {
        for k in keys() {
            assert_eq!(lookup(&k).unwrap().key, k);
        }
        assert_eq!(lookup("thm1.3/10/m=5").unwrap().key, "thm1.3/10/m=5");
        assert_eq!(lookup("example1.6/g=9").unwrap().key, "example1.6/g=9");
        assert_eq!(lookup("thm1.4/case3/n=2,h=0").unwrap().key, "thm1.4/case3/n=2,h=0");
        assert!(lookup("thm1.3/23").is_err());
        assert!(lookup("thm1.3/10/k=2").is_err());
        assert!(lookup("nope").is_err());
    }
}
