use std::f64::consts::PI;

use crate::basis::{field, ScalarField};
use crate::geometry::Domain;
use crate::solvers::{Method, ProblemSpec};

/// The smooth test solution `⋆ω = sin 2πx sin 2πy` and its derived fields.
#[derive(Clone)]
pub struct ManufacturedSolution {
    /// `φ = ⋆ω`.
    pub phi: ScalarField,
    /// Physical components `(q_x, q_y) = (-φ_y, φ_x)` of `q = ⋆dφ`.
    pub flux: (ScalarField, ScalarField),
    /// Density of `f = Δφ`.
    pub source: ScalarField,
}

impl ManufacturedSolution {
    pub fn sine() -> Self {
        let k = 2.0 * PI;
        ManufacturedSolution {
            phi: field(move |x, y| (k * x).sin() * (k * y).sin()),
            flux: (
                field(move |x, y| -k * (k * x).sin() * (k * y).cos()),
                field(move |x, y| k * (k * x).cos() * (k * y).sin()),
            ),
            source: field(move |x, y| -2.0 * k * k * (k * x).sin() * (k * y).sin()),
        }
    }
}

/// Poisson problem whose exact solution is `ω = sin 2πx sin 2πy dx∧dy`, with
/// Dirichlet data taken from it. Method, order and mesh size are set to
/// `dual`, `N = 1`, `1 × 1` and may be changed on the returned value.
pub fn manufactured_problem(domain: Domain, c: f64) -> ProblemSpec {
    let m = ManufacturedSolution::sine();
    ProblemSpec {
        method: Method::Dual,
        order: 1,
        mx: 1,
        my: 1,
        c,
        domain,
        source: m.source,
        dirichlet: m.phi,
        neumann: None,
        quad_order: None,
    }
}

/// Manufactured problem with the discretisation fully specified.
pub fn manufactured_spec(method: Method, order: usize, m: usize, c: f64, domain: Domain) -> ProblemSpec {
    ProblemSpec { method, order, mx: m, my: m, ..manufactured_problem(domain, c) }
}
