//! Dual-grid and single-grid solvers for `d ⋆d⋆ ω = f` on deformed
//! multi-element meshes.
//!
//! Both methods return the primal 2-cochain `ω` and the primal flux 1-cochain
//! `q = ⋆d⋆ω`, so that `δq = f_h` cell by cell. With `φ = ⋆ω` the flux is
//! `q = φ_x dy - φ_y dx` and the source density is `f = Δφ`.

mod dual;
mod single;

use std::sync::Arc;
use std::time::Instant;

use crate::basis::{field, gauss_legendre, reduce, tensor_sum, ScalarField, SmoothForm};
use crate::error::{Error, Result};
use crate::geometry::{pullback, Domain};
use crate::mesh::Mesh;
use crate::topology::{Cochain, Side};

pub use dual::{assemble_dual, dual_element_operator, solve_dual, DualElementOperator, DualSystem};
pub use single::{assemble_single, solve_single, SingleSystem};

/// Discretisation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Staggered dual grid with explicit Hodge matrices.
    Dual,
    /// Mixed formulation on a single grid with mass matrices.
    Single,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dual => "dual",
            Method::Single => "single",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dual" => Ok(Method::Dual),
            "single" => Ok(Method::Single),
            _ => Err(Error::InvalidConfig(format!("unknown method '{s}' (expected dual or single)"))),
        }
    }
}

/// Prescribed flux `tr q` on some sides of the domain (single-grid only).
#[derive(Clone)]
pub struct NeumannData {
    pub sides: Vec<Side>,
    /// Physical components `(q_x, q_y)` of `q = q_x dx + q_y dy`.
    pub flux: (ScalarField, ScalarField),
}

/// A Poisson problem for a volume form with its discretisation parameters.
#[derive(Clone)]
pub struct ProblemSpec {
    pub method: Method,
    pub order: usize,
    pub mx: usize,
    pub my: usize,
    pub c: f64,
    pub domain: Domain,
    /// Density of the source 2-form `f dx∧dy`.
    pub source: ScalarField,
    /// Boundary values of `⋆ω`.
    pub dirichlet: ScalarField,
    pub neumann: Option<NeumannData>,
    /// Gauss points per direction; `None` means `N + 3`.
    pub quad_order: Option<usize>,
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("method", &self.method)
            .field("order", &self.order)
            .field("mx", &self.mx)
            .field("my", &self.my)
            .field("c", &self.c)
            .field("domain", &self.domain)
            .field("quad_order", &self.quad_order)
            .field("neumann", &self.neumann.as_ref().map(|n| n.sides.clone()))
            .finish()
    }
}

impl ProblemSpec {
    /// Problem with homogeneous data on an `m × m` mesh.
    pub fn homogeneous(method: Method, order: usize, m: usize, c: f64, domain: Domain) -> Self {
        ProblemSpec {
            method,
            order,
            mx: m,
            my: m,
            c,
            domain,
            source: field(|_, _| 0.0),
            dirichlet: field(|_, _| 0.0),
            neumann: None,
            quad_order: None,
        }
    }

    pub fn with_method(&self, method: Method) -> Self {
        ProblemSpec { method, ..self.clone() }
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order.unwrap_or(self.order + 3)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.order > crate::basis::MAX_GLL_ORDER {
            return Err(Error::InvalidConfig(format!("order N = {} out of range", self.order)));
        }
        if self.mx == 0 || self.my == 0 {
            return Err(Error::InvalidConfig("element counts must be at least 1".into()));
        }
        if !self.c.is_finite() || self.c.abs() >= 1.0 / std::f64::consts::PI {
            return Err(Error::InvalidConfig(format!("deformation |c| = {} must be below 1/π", self.c)));
        }
        if self.quad_order() < self.order + 1 {
            return Err(Error::InvalidConfig("quadrature order must be at least N + 1".into()));
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<Mesh> {
        self.validate()?;
        Mesh::new(self.order, self.mx, self.my, self.c, self.domain)
    }
}

/// Solver health indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `‖A x - b‖_∞` of the final linear solve.
    pub residual_inf: f64,
    /// Ratio of extreme LU pivots.
    pub condition_estimate: f64,
    /// Number of unknowns in the linear system.
    pub dof: usize,
    pub runtime_s: f64,
}

/// Discrete solution on a mesh.
#[derive(Debug, Clone)]
pub struct Solution {
    pub method: Method,
    pub mesh: Arc<Mesh>,
    /// Primal 2-cochain on the global complex.
    pub omega: Cochain,
    /// Primal flux 1-cochain on the global complex.
    pub q: Cochain,
    /// Reduced source on the global complex.
    pub f_h: Cochain,
    pub diagnostics: Diagnostics,
}

impl Solution {
    fn gather(&self, k: usize, e: usize) -> Vec<f64> {
        let c = if k == 1 { &self.q } else { &self.omega };
        self.mesh.local_to_global(k, e).into_iter().map(|g| c.coefficients[g]).collect()
    }

    /// Local ω coefficients of element `e`.
    pub fn element_omega(&self, e: usize) -> Vec<f64> {
        self.gather(2, e)
    }

    /// Local q coefficients of element `e`.
    pub fn element_q(&self, e: usize) -> Vec<f64> {
        self.gather(1, e)
    }

    /// Physical density of the reconstructed ω, i.e. `⋆ω_h`, at a reference point of element `e`.
    pub fn omega_density(&self, e: usize, xi: f64, eta: f64) -> f64 {
        let f = self.mesh.family();
        let w = tensor_sum(&self.element_omega(e), &f.edge_all(xi), &f.edge_all(eta));
        w / self.mesh.element_map(e).det(xi, eta)
    }

    /// Physical components `(q_x, q_y)` of the reconstructed flux.
    pub fn flux(&self, e: usize, xi: f64, eta: f64) -> (f64, f64) {
        flux_from_local(&self.mesh, e, &self.element_q(e), xi, eta)
    }

    /// `⋆ω_h` at a physical point.
    pub fn omega_at(&self, x: f64, y: f64) -> Result<f64> {
        let (e, xi, eta) = self.mesh.locate(x, y)?;
        Ok(self.omega_density(e, xi, eta))
    }

    /// `‖δq − f_h‖_∞`.
    pub fn conservation(&self) -> f64 {
        conservation_residual(self, &self.f_h)
    }
}

pub(crate) fn flux_from_local(mesh: &Mesh, e: usize, q: &[f64], xi: f64, eta: f64) -> (f64, f64) {
    let f = mesh.family();
    let n = f.order();
    let (hx, hy) = (f.lagrange_all(xi), f.lagrange_all(eta));
    let (ex, ey) = (f.edge_all(xi), f.edge_all(eta));
    let split = n * (n + 1);
    let a = [tensor_sum(&q[..split], &ex, &hy), tensor_sum(&q[split..], &hx, &ey)];
    let j = mesh.element_map(e).jacobian(xi, eta);
    let inv = crate::geometry::inv2(&j);
    // Physical components are J⁻ᵀ a.
    (inv[0][0] * a[0] + inv[1][0] * a[1], inv[0][1] * a[0] + inv[1][1] * a[1])
}

/// `‖δq − f_h‖_∞` over all surfaces.
pub fn conservation_residual(sol: &Solution, f_h: &Cochain) -> f64 {
    let g = sol.mesh.global_complex();
    let e21 = g.incidence_matrix(2).expect("2D complex has E(2,1)");
    e21.apply(&sol.q.coefficients)
        .iter()
        .zip(&f_h.coefficients)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Reduction of the physical source density on every element cell, in global numbering.
pub fn reduce_source(mesh: &Mesh, source: &ScalarField, quad_order: usize) -> Result<Cochain> {
    let mut out = vec![0.0; mesh.global_complex().num_surfaces()];
    for e in 0..mesh.num_elements() {
        let local = reduce(&pullback(&SmoothForm::Two(source.clone()), mesh.element_map(e)), mesh.local_complex(), quad_order)?;
        for (g, v) in mesh.local_to_global(2, e).into_iter().zip(local.coefficients) {
            out[g] = v;
        }
    }
    Ok(Cochain::new(2, out))
}

/// Solves with the method named in `spec`.
pub fn solve(spec: &ProblemSpec) -> Result<Solution> {
    match spec.method {
        Method::Dual => solve_dual(spec),
        Method::Single => solve_single(spec),
    }
}

/// Reference points and weights of a composite Gauss rule over `[-1, 1]`
/// split at the given nodes.
pub(crate) fn composite_gauss(nodes: &[f64], quad_order: usize) -> Result<Vec<(f64, f64)>> {
    let g = gauss_legendre(quad_order)?;
    let mut out = Vec::with_capacity((nodes.len() - 1) * quad_order);
    for w in nodes.windows(2) {
        let (x, wt) = g.mapped(w[0], w[1]);
        out.extend(x.into_iter().zip(wt));
    }
    Ok(out)
}

pub(crate) fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}
