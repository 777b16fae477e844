//! Exact local invariants of singular fibers of curve families.
//!
//! Fibers are given as decorated dual graphs of normal-crossing models
//! ([`FiberGraph`]). From those the crate computes the local Chern numbers
//! `c₁²`, `c₂`, `χ` and their auxiliary invariants, builds dual fibers by
//! Hirzebruch–Jung chain insertion, checks the known inequalities, and
//! enumerates numerical fibers for classification checks.

pub mod arith;
pub mod canon;
pub mod catalog;
pub mod classify;
pub mod dualizer;
pub mod error;
pub mod expr;
pub mod fiber;
pub mod invariants;
pub mod rational;
pub mod search;

pub use arith::{branch_beta, chi_pair, dedekind_sum, dedekind_sum_direct, hj_expand, HjChain};
pub use catalog::{CatalogEntry, Expected, KodairaKind};
pub use classify::{c1_upper_bound, classify_fiber, inequality_report, Classification, InequalityReport};
pub use canon::{canonical_form, canonical_labeling};
pub use dualizer::{dual_fiber, duality_check, multiplicity_lcm, node_chain, DualityCheck};
pub use error::{FiberError, Result};
pub use expr::Predicate;
pub use fiber::{
    emit_fiber, fiber_genus, is_minimal_nc, minimize, parse_fiber, validate, Component, FiberBuilder,
    FiberGraph, NodeEdge, ResolutionRecord, ValidationReport,
};
pub use invariants::{chi_via_pairs, compute_invariants, hj_branches, reduced_pa, InvariantBundle};
pub use rational::Rational;
pub use search::{enumerate_fibers, verify_theorem13, SearchBounds, SearchResult};
