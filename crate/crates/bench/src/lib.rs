//! Fixed problem sizes shared by the benchmarks.

use mimetic_core::geometry::Domain;
use mimetic_core::harness::manufactured_spec;
use mimetic_core::solvers::{Method, ProblemSpec};

/// (order, elements per side) pairs timed by every benchmark group.
pub const CASES: [(usize, usize); 3] = [(3, 4), (3, 8), (6, 4)];

/// Deformation used throughout, so the metric terms are exercised.
pub const C: f64 = 0.1;

pub fn spec(method: Method, order: usize, m: usize) -> ProblemSpec {
    manufactured_spec(method, order, m, C, Domain::Unit)
}

pub fn label(order: usize, m: usize) -> String {
    format!("N{order}_{m}x{m}")
}
