//! Mixed single-grid formulation.
//!
//! Find `q` in the edge space and `ω` in the surface space with
//!
//! ```text
//! (q, v) + (ω, dv) = ∮ ⋆ω tr v    for all v
//! (dq, σ)          = (f, σ)       for all σ
//! ```
//!
//! which in matrix form reads `[[M¹, (M²E)ᵀ], [M²E, 0]] [q; ω] = [b; M² f]`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{composite_gauss, reduce_source, timed, Diagnostics, Method, ProblemSpec, Solution};
use crate::assembly::mass_matrix;
use crate::error::{Error, Result};
use crate::linalg::{solve_direct, CsrMatrix, TripletBuilder};
use crate::mesh::Mesh;
use crate::topology::{Cochain, Side};

/// Assembled saddle point system of the mixed method.
#[derive(Debug, Clone)]
pub struct SingleSystem {
    /// Full system matrix; Neumann rows are replaced by identity rows.
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub n_q: usize,
    pub n_omega: usize,
    /// Global 1-form mass matrix.
    pub m1: CsrMatrix,
    /// Block-diagonal 2-form mass matrix.
    pub m2: CsrMatrix,
    /// `M² E(2,1)`, `n_omega × n_q`.
    pub m2e: CsrMatrix,
    /// Boundary term `∮ ⋆ω tr v` per edge basis function.
    pub boundary: Vec<f64>,
    pub f_h: Cochain,
    /// Edges whose flux is prescribed.
    pub neumann_edges: Vec<usize>,
}

/// Local edge indices on one side of the reference square, in increasing
/// coordinate order.
pub(crate) fn side_edges(n: usize, side: Side) -> Vec<usize> {
    let xi = |i: usize, j: usize| j * n + (i - 1);
    let eta = |i: usize, j: usize| n * (n + 1) + (j - 1) * (n + 1) + i;
    match side {
        Side::South => (1..=n).map(|i| xi(i, 0)).collect(),
        Side::North => (1..=n).map(|i| xi(i, n)).collect(),
        Side::West => (1..=n).map(|j| eta(0, j)).collect(),
        Side::East => (1..=n).map(|j| eta(n, j)).collect(),
    }
}

/// Elements touching a side of the domain.
pub(crate) fn boundary_elements(mesh: &Mesh, side: Side) -> Vec<usize> {
    let (mx, my) = (mesh.mx(), mesh.my());
    match side {
        Side::South => (0..mx).collect(),
        Side::North => (0..mx).map(|ex| (my - 1) * mx + ex).collect(),
        Side::West => (0..my).map(|ey| ey * mx).collect(),
        Side::East => (0..my).map(|ey| ey * mx + mx - 1).collect(),
    }
}

/// Reference point on `side` at tangential coordinate `s`.
pub(crate) fn side_point(side: Side, s: f64) -> (f64, f64) {
    match side {
        Side::South => (s, -1.0),
        Side::North => (s, 1.0),
        Side::West => (-1.0, s),
        Side::East => (1.0, s),
    }
}

const SIDES: [Side; 4] = [Side::South, Side::East, Side::North, Side::West];

pub fn assemble_single(spec: &ProblemSpec, mesh: &Mesh) -> Result<SingleSystem> {
    let n = mesh.order();
    let quad = spec.quad_order();
    let g = mesh.global_complex();
    let (n_q, n_omega) = (g.num_edges(), g.num_surfaces());
    let e21 = mesh.local_complex().incidence_matrix(2)?;
    let ne = e21.cols;
    let e21_int = e21.to_dense();
    let e21_dense = DMatrix::from_fn(e21.rows, ne, |r, c| e21_int[r][c] as f64);

    let locals: Vec<(DMatrix<f64>, DMatrix<f64>)> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let map = mesh.element_map(e);
            let m1 = mass_matrix(1, mesh.family(), map, quad)?.matrix;
            let m2 = mass_matrix(2, mesh.family(), map, quad)?.matrix;
            Ok((m1, m2))
        })
        .collect::<Result<_>>()?;

    let f_h = reduce_source(mesh, &spec.source, quad)?;

    let neumann_sides: Vec<Side> = spec.neumann.as_ref().map(|d| d.sides.clone()).unwrap_or_default();
    let mut neumann_value = vec![None::<f64>; n_q];
    if let Some(data) = &spec.neumann {
        let pts = composite_gauss(&[-1.0, 1.0], quad)?;
        for &side in &data.sides {
            for e in boundary_elements(mesh, side) {
                let map = mesh.element_map(e);
                let l2g = mesh.local_to_global(1, e);
                let nodes = mesh.family().nodes();
                for (m, &le) in side_edges(n, side).iter().enumerate() {
                    let (a, b) = (nodes[m], nodes[m + 1]);
                    let mut v = 0.0;
                    for &(t, w) in &pts {
                        let s = 0.5 * (a + b) + 0.5 * (b - a) * t;
                        let (xi, eta) = side_point(side, s);
                        let (x, y) = map.map(xi, eta);
                        let j = map.jacobian(xi, eta);
                        let (qx, qy) = ((data.flux.0)(x, y), (data.flux.1)(x, y));
                        let comp = match side {
                            Side::South | Side::North => j[0][0] * qx + j[1][0] * qy,
                            Side::West | Side::East => j[0][1] * qx + j[1][1] * qy,
                        };
                        v += 0.5 * (b - a) * w * comp;
                    }
                    neumann_value[l2g[le]] = Some(v);
                }
            }
        }
    }

    // Boundary term ∮ φ tr v, counter-clockwise.
    let mut boundary = vec![0.0; n_q];
    let pts = composite_gauss(mesh.family().nodes(), quad)?;
    for side in SIDES {
        if neumann_sides.contains(&side) {
            continue;
        }
        let sign = match side {
            Side::South | Side::East => 1.0,
            Side::North | Side::West => -1.0,
        };
        for e in boundary_elements(mesh, side) {
            let map = mesh.element_map(e);
            let l2g = mesh.local_to_global(1, e);
            let edges = side_edges(n, side);
            for &(s, w) in &pts {
                let (xi, eta) = side_point(side, s);
                let (x, y) = map.map(xi, eta);
                let phi = (spec.dirichlet)(x, y);
                let eps = mesh.family().edge_all(s);
                for (m, &le) in edges.iter().enumerate() {
                    boundary[l2g[le]] += sign * w * phi * eps[m];
                }
            }
        }
    }

    let mut m1 = TripletBuilder::new(n_q, n_q);
    let mut m2 = TripletBuilder::new(n_omega, n_omega);
    let mut m2e = TripletBuilder::new(n_omega, n_q);
    let mut k = TripletBuilder::new(n_q + n_omega, n_q + n_omega);
    let mut rhs = vec![0.0; n_q + n_omega];
    rhs[..n_q].copy_from_slice(&boundary);
    for (e, (lm1, lm2)) in locals.iter().enumerate() {
        let q_map = mesh.local_to_global(1, e);
        let w_map = mesh.local_to_global(2, e);
        let b = lm2 * &e21_dense;
        for c in 0..ne {
            for r in 0..ne {
                let v = lm1[(r, c)];
                m1.push(q_map[r], q_map[c], v);
                if neumann_value[q_map[r]].is_none() {
                    k.push(q_map[r], q_map[c], v);
                }
            }
        }
        for s in 0..w_map.len() {
            for t in 0..w_map.len() {
                m2.push(w_map[s], w_map[t], lm2[(s, t)]);
            }
            let fs: f64 = (0..w_map.len()).map(|t| lm2[(s, t)] * f_h.coefficients[w_map[t]]).sum();
            rhs[n_q + w_map[s]] += fs;
            for r in 0..ne {
                let v = b[(s, r)];
                m2e.push(w_map[s], q_map[r], v);
                k.push(n_q + w_map[s], q_map[r], v);
                if neumann_value[q_map[r]].is_none() {
                    k.push(q_map[r], n_q + w_map[s], v);
                }
            }
        }
    }
    let mut neumann_edges = Vec::new();
    for (r, v) in neumann_value.iter().enumerate() {
        if let Some(v) = v {
            k.push(r, r, 1.0);
            rhs[r] = *v;
            neumann_edges.push(r);
        }
    }
    Ok(SingleSystem {
        matrix: k.build(),
        rhs,
        n_q,
        n_omega,
        m1: m1.build(),
        m2: m2.build(),
        m2e: m2e.build(),
        boundary,
        f_h,
        neumann_edges,
    })
}

/// Solves the mixed single-grid system.
pub fn solve_single(spec: &ProblemSpec) -> Result<Solution> {
    if spec.method != Method::Single {
        return Err(Error::InvalidConfig("solve_single requires the single-grid method".into()));
    }
    if let Some(n) = &spec.neumann {
        if n.sides.len() == 4 {
            return Err(Error::InvalidConfig("at least one side needs Dirichlet data".into()));
        }
    }
    let ((mesh, sys, x), runtime) = timed(|| {
        let mesh = spec.mesh()?;
        let sys = assemble_single(spec, &mesh)?;
        let x = solve_direct(&sys.matrix, &sys.rhs)
            .map_err(|e| Error::SolverFailure(format!("single-grid saddle system: {e}")))?;
        Ok((mesh, sys, x))
    })?;
    let q = Cochain::new(1, x.x[..sys.n_q].to_vec());
    let omega = Cochain::new(2, x.x[sys.n_q..].to_vec());
    Ok(Solution {
        method: Method::Single,
        mesh: Arc::new(mesh),
        omega,
        q,
        f_h: sys.f_h,
        diagnostics: Diagnostics {
            residual_inf: x.residual_inf,
            condition_estimate: x.condition_estimate,
            dof: sys.n_q + sys.n_omega,
            runtime_s: runtime,
        },
    })
}
