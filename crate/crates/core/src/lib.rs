//! Classification of LDP-polygons: convex lattice polygons with the origin in
//! their strict interior and primitive vertices, up to `GL(2, Z)` equivalence.
//!
//! The crate provides exact invariants ([`invariants`]), a canonical form for
//! equivalence classes ([`normal_form`]), closed-form bounds ([`bounds`]), two
//! independent classification algorithms ([`enum_index`] by index and
//! [`enum_local`] by maximal local index), a brute-force cross-check
//! ([`oracle`]) and catalog persistence ([`catalog`]).

pub mod bounds;
pub mod catalog;
pub mod enum_index;
pub mod enum_local;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod normal_form;
pub mod oracle;
pub mod polygon;

pub use error::{Error, Result};
pub use lattice::{cross, gcd, in_cone, is_primitive, lcm, LatticePoint, Rational, UnimodularMap};
pub use normal_form::{canonical, equivalent, CanonicalForm};
pub use polygon::{Facet, Polygon, Requirement};

/// Default search budget in nodes per classification run.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Reads the `LDP_NODE_BUDGET` override, falling back to [`DEFAULT_NODE_BUDGET`].
pub fn node_budget_from_env() -> u64 {
    std::env::var("LDP_NODE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}
