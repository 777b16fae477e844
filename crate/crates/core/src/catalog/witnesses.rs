//! Generated families: the extremal multiple fiber and the small-gap witnesses.

use super::{CatalogEntry, Expected};
use crate::error::{FiberError, Result};
use crate::fiber::FiberBuilder;
use crate::rational::{int, ratio, Rational};

/// `(g − 1)·F₀` with `F₀` of genus 2, sitting on `c₁² = 4g − 11/2`.
pub fn example_family(g: i64) -> Result<CatalogEntry> {
    if g < 2 {
        return Err(FiberError::InvalidArgument(format!("genus {g} < 2")));
    }
    let k = g - 1;
    let graph = FiberBuilder::new(format!("example1.6/g={g}"))
        .component("v0", 2 * k, Some(-3), 0)
        .component("v1", 3 * k, Some(-2), 0)
        .component("v2", 3 * k, Some(-2), 0)
        .component("v3", 4 * k, Some(-2), 0)
        .component("v4", 2 * k, Some(-2), 0)
        .path(&["v0", "v1", "v3", "v2", "v0"])
        .node("v3", "v4", 1)
        .genus_check(g)
        .build()?;
    Ok(CatalogEntry {
        key: format!("example1.6/g={g}"),
        graph,
        expected: Expected::chern(g, int(4 * g) - ratio(11, 2), int(2 * g) + ratio(5, 2), ratio(2 * g - 1, 4)),
        provenance: "multiple fiber (g-1)F0 attaining c1^2 = 4g - 11/2".into(),
    })
}

/// Tabulated `(2c₂ − c₁², c₁² − 4N, c₂ − 2N, χ − N/2)` for cases 1..=8.
pub fn theorem14_offsets(case: u32) -> Option<[Rational; 4]> {
    let row = match case {
        1 => [(0, 1), (0, 1), (0, 1), (0, 1)],
        2 => [(7, 2), (1, 6), (11, 6), (1, 6)],
        3 => [(9, 2), (1, 2), (5, 2), (1, 4)],
        4 => [(21, 4), (1, 4), (11, 4), (1, 4)],
        5 => [(5, 1), (1, 1), (3, 1), (1, 3)],
        6 => [(3, 1), (-1, 1), (1, 1), (0, 1)],
        7 => [(9, 2), (-3, 2), (3, 2), (0, 1)],
        8 => [(11, 2), (-1, 2), (5, 2), (1, 6)],
        _ => return None,
    };
    Some(row.map(|(a, b)| ratio(a, b)))
}

/// Smallest allowed `h` per case.
fn min_h(case: u32) -> i64 {
    match case {
        1 => 2,
        3 | 5 => 0,
        _ => 1,
    }
}

/// `(g, p_a(F_red))` of the witness, read off the singular minimal fiber.
fn genus_and_pa(case: u32, n: i64, h: i64) -> (i64, i64) {
    match case {
        1 => (n * (h - 1) + 1, h),
        2 | 4 => (n * h + 1, h + 1),
        3 => (n * (h + 1) + 1, h + 2),
        5 => (n * (h + 2) + 1, h + 3),
        6 => (2 * n * h + 1, h + 1),
        7 => (n * (h + 1) + 1, h + 1),
        8 => (n * (h + 2) + 1, h + 2),
        _ => unreachable!(),
    }
}

/// A normal-crossing witness for case `case` with multiplicity scale `n` and
/// base genus `h` (the genus of the non-rational piece; default the smallest allowed).
pub fn theorem14_family(case: u32, n: i64, h: Option<i64>) -> Result<CatalogEntry> {
    let offsets = theorem14_offsets(case)
        .ok_or_else(|| FiberError::InvalidArgument(format!("case {case} is not in 1..=8")))?;
    if n < 1 {
        return Err(FiberError::InvalidArgument(format!("n = {n} must be positive")));
    }
    let explicit = h.is_some();
    let h = h.unwrap_or(min_h(case));
    if h < min_h(case) {
        return Err(FiberError::InvalidArgument(format!("case {case} needs h >= {}, got {h}", min_h(case))));
    }
    let (g, pa) = genus_and_pa(case, n, h);
    let key = if explicit || n != 1 {
        format!("thm1.4/case{case}/n={n},h={h}")
    } else {
        format!("thm1.4/case{case}")
    };
    let b = FiberBuilder::new(key.clone()).genus_check(g);
    let b = match case {
        1 => b.component("c", n, Some(0), h),
        2 => b
            .component("c", n, Some(-6), h)
            .component("e6", 6 * n, Some(-1), 0)
            .component("e2", 2 * n, Some(-3), 0)
            .component("e3", 3 * n, Some(-2), 0)
            .node("c", "e6", 1)
            .node("e2", "e6", 1)
            .node("e3", "e6", 1)
            .blowups(3),
        3 => b
            .component("c", n, Some(-8), h)
            .component("e2", 4 * n, Some(-1), 0)
            .component("e1", 2 * n, Some(-2), 0)
            .node("c", "e2", 2)
            .node("e1", "e2", 1)
            .blowups(2),
        4 => b
            .component("c1", n, Some(-4), h)
            .component("c2", n, Some(-4), 0)
            .component("e2", 4 * n, Some(-1), 0)
            .component("e1", 2 * n, Some(-2), 0)
            .node("c1", "e2", 1)
            .node("c2", "e2", 1)
            .node("e1", "e2", 1)
            .blowups(2),
        5 => b
            .component("c", n, Some(-9), h)
            .component("e", 3 * n, Some(-1), 0)
            .node("c", "e", 3)
            .blowups(1),
        6 => b
            .component("a", n, Some(-4), 0)
            .component("b", 2 * n, Some(-1), h)
            .node("a", "b", 2),
        7 => b
            .component("a1", n, Some(-2), 0)
            .component("a2", n, Some(-2), h)
            .component("b", 2 * n, Some(-1), 1)
            .node("a1", "b", 1)
            .node("a2", "b", 1),
        8 => b
            .component("a", n, Some(-6), h)
            .component("b", 2 * n, Some(-3), 1)
            .component("e2", 6 * n, Some(-1), 0)
            .component("e1", 3 * n, Some(-2), 0)
            .node("a", "e2", 1)
            .node("b", "e2", 1)
            .node("e1", "e2", 1)
            .blowups(2),
        _ => unreachable!(),
    };
    let nn = g - pa;
    let [_, dc1, dc2, dchi] = offsets;
    let expected = Expected::chern(
        g,
        int(4 * nn) + dc1,
        int(2 * nn) + dc2,
        ratio(nn, 2) + dchi,
    )
    .with("N_min", int(nn));
    Ok(CatalogEntry {
        key,
        graph: b.build()?,
        expected,
        provenance: format!("witness for case {case} of the classification of fibers with 2c2 - c1^2 < 6"),
    })
}
