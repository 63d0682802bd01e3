//! Dual-grid formulation `E(2,1) H̃¹¹ Ẽ(1,0) H⁰² ω = f`.
//!
//! On every element the dual 0-cochain consists of `ω̃ = H⁰² ω` at the
//! interior dual points and ghost values at the dual points on the element
//! boundary. Ghosts on the domain boundary carry the Dirichlet data `⋆ω`;
//! ghosts on an interface between two elements are shared unknowns, closed by
//! requiring both elements to produce the same flux on the interface edges.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::single::side_edges;
use super::{reduce_source, timed, Diagnostics, Method, ProblemSpec, Solution};
use crate::assembly::{hodge_02, hodge_11_dual_to_primal, DualBasis};
use crate::error::{Error, Result};
use crate::linalg::{solve_direct, CsrMatrix, TripletBuilder};
use crate::mesh::Mesh;
use crate::topology::{build_dual_grid, Cochain, DualGrid, Side};

/// Per-element operators of the dual-grid method.
///
/// With `g` the side ghost values (west, east, south, north; `N` each), the
/// element flux is `q = C ω + D g` and its divergence `E(2,1) q = A ω + B g`.
#[derive(Debug, Clone)]
pub struct DualElementOperator {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

fn to_dense(m: &crate::topology::IncidenceMatrix) -> DMatrix<f64> {
    let d = m.to_dense();
    DMatrix::from_fn(m.rows, m.cols, |r, c| d[r][c] as f64)
}

/// Builds the dual grid of one element and the dual basis on Gauss nodes.
pub(crate) fn element_dual(mesh: &Mesh) -> Result<(DualGrid, DualBasis)> {
    let basis = DualBasis::gauss(mesh.order())?;
    let grid = build_dual_grid(mesh.local_complex(), basis.nodes())?;
    Ok((grid, basis))
}

/// Operators of element `e`.
pub fn dual_element_operator(mesh: &Mesh, e: usize, quad_order: usize) -> Result<DualElementOperator> {
    let (grid, basis) = element_dual(mesh)?;
    element_operator(mesh, e, quad_order, &grid, &basis)
}

fn element_operator(
    mesh: &Mesh,
    e: usize,
    quad_order: usize,
    grid: &DualGrid,
    basis: &DualBasis,
) -> Result<DualElementOperator> {
    let map = mesh.element_map(e);
    let family = mesh.family();
    let h02 = hodge_02(family, basis.nodes(), map)?.matrix;
    let h11 = hodge_11_dual_to_primal(basis, family, map, quad_order)?.matrix;
    let e21 = to_dense(&mesh.local_complex().incidence_matrix(2)?);
    let g = to_dense(&grid.ghost_incidence()?);
    let c = &h11 * e21.transpose() * h02;
    let d = &h11 * g;
    Ok(DualElementOperator { a: &e21 * &c, b: &e21 * &d, c, d })
}

/// Value of one ghost slot of an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GhostSlot {
    /// Dirichlet value on the domain boundary.
    Known(f64),
    /// Index of a shared interface unknown in the global system.
    Unknown(usize),
}

/// Assembled dual-grid system.
#[derive(Debug, Clone)]
pub struct DualSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// ω unknowns, `N²` per element in element order.
    pub n_omega: usize,
    /// Interface ghost unknowns, `N` per interface.
    pub n_ghost: usize,
    pub operators: Vec<DualElementOperator>,
    /// Ghost slots per element in (west, east, south, north) order.
    pub ghosts: Vec<Vec<GhostSlot>>,
    pub f_h: Cochain,
}

const GHOST_SIDES: [Side; 4] = [Side::West, Side::East, Side::South, Side::North];

/// Interface id of the side of element `(ex, ey)`, or `None` on the boundary.
fn interface_id(mesh: &Mesh, ex: usize, ey: usize, side: Side) -> Option<usize> {
    let (mx, my) = (mesh.mx(), mesh.my());
    let n_vertical = (mx - 1) * my;
    match side {
        Side::West => (ex > 0).then(|| ey * (mx - 1) + ex - 1),
        Side::East => (ex + 1 < mx).then(|| ey * (mx - 1) + ex),
        Side::South => (ey > 0).then(|| n_vertical + (ey - 1) * mx + ex),
        Side::North => (ey + 1 < my).then(|| n_vertical + ey * mx + ex),
    }
}

pub fn assemble_dual(spec: &ProblemSpec, mesh: &Mesh) -> Result<DualSystem> {
    let n = mesh.order();
    let nn = n * n;
    let quad = spec.quad_order();
    let (grid, basis) = element_dual(mesh)?;
    let operators: Vec<DualElementOperator> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| element_operator(mesh, e, quad, &grid, &basis))
        .collect::<Result<_>>()?;

    let (mx, my) = (mesh.mx(), mesh.my());
    let n_interfaces = (mx - 1) * my + mx * (my - 1);
    let n_omega = mesh.num_elements() * nn;
    let n_ghost = n_interfaces * n;
    let size = n_omega + n_ghost;

    let mut ghosts = Vec::with_capacity(mesh.num_elements());
    for e in 0..mesh.num_elements() {
        let (ex, ey) = mesh.element_coords(e);
        let map = mesh.element_map(e);
        let mut slots = Vec::with_capacity(4 * n);
        for side in GHOST_SIDES {
            let id = interface_id(mesh, ex, ey, side);
            for m in 0..n {
                slots.push(match id {
                    Some(id) => GhostSlot::Unknown(n_omega + id * n + m),
                    None => {
                        let p = grid.point_coords(grid.ghost_index(side, m));
                        let (x, y) = map.map(p.0, p.1);
                        GhostSlot::Known((spec.dirichlet)(x, y))
                    }
                });
            }
        }
        ghosts.push(slots);
    }

    let f_h = reduce_source(mesh, &spec.source, quad)?;
    let mut t = TripletBuilder::new(size, size);
    let mut rhs = vec![0.0; size];

    for (e, op) in operators.iter().enumerate() {
        let l2g = mesh.local_to_global(2, e);
        for r in 0..nn {
            let row = e * nn + r;
            rhs[row] = f_h.coefficients[l2g[r]];
            for c in 0..nn {
                t.push(row, e * nn + c, op.a[(r, c)]);
            }
            for (g, slot) in ghosts[e].iter().enumerate() {
                match *slot {
                    GhostSlot::Known(v) => rhs[row] -= op.b[(r, g)] * v,
                    GhostSlot::Unknown(u) => t.push(row, u, op.b[(r, g)]),
                }
            }
        }
    }

    // Flux continuity across every interface: q_first(edge) - q_second(edge) = 0.
    let flux_row = |row: usize, e: usize, edge: usize, sign: f64, t: &mut TripletBuilder, rhs: &mut [f64]| {
        let op = &operators[e];
        for c in 0..nn {
            t.push(row, e * nn + c, sign * op.c[(edge, c)]);
        }
        for (g, slot) in ghosts[e].iter().enumerate() {
            match *slot {
                GhostSlot::Known(v) => rhs[row] -= sign * op.d[(edge, g)] * v,
                GhostSlot::Unknown(u) => t.push(row, u, sign * op.d[(edge, g)]),
            }
        }
    };
    for ey in 0..my {
        for ex in 0..mx {
            let e = ey * mx + ex;
            if let Some(id) = interface_id(mesh, ex, ey, Side::East) {
                let (left, right) = (side_edges(n, Side::East), side_edges(n, Side::West));
                for m in 0..n {
                    let row = n_omega + id * n + m;
                    flux_row(row, e, left[m], 1.0, &mut t, &mut rhs);
                    flux_row(row, e + 1, right[m], -1.0, &mut t, &mut rhs);
                }
            }
            if let Some(id) = interface_id(mesh, ex, ey, Side::North) {
                let (below, above) = (side_edges(n, Side::North), side_edges(n, Side::South));
                for m in 0..n {
                    let row = n_omega + id * n + m;
                    flux_row(row, e, below[m], 1.0, &mut t, &mut rhs);
                    flux_row(row, e + mx, above[m], -1.0, &mut t, &mut rhs);
                }
            }
        }
    }

    Ok(DualSystem { matrix: t.build(), rhs, n_omega, n_ghost, operators, ghosts, f_h })
}

/// Solves the dual-grid system.
pub fn solve_dual(spec: &ProblemSpec) -> Result<Solution> {
    if spec.method != Method::Dual {
        return Err(Error::InvalidConfig("solve_dual requires the dual-grid method".into()));
    }
    if spec.neumann.is_some() {
        return Err(Error::InvalidConfig("flux boundary conditions are only supported by the single-grid method".into()));
    }
    let ((mesh, sys, x), runtime) = timed(|| {
        let mesh = spec.mesh()?;
        let sys = assemble_dual(spec, &mesh)?;
        let x = solve_direct(&sys.matrix, &sys.rhs)
            .map_err(|e| Error::SolverFailure(format!("dual-grid system: {e}")))?;
        Ok((mesh, sys, x))
    })?;
    let n = mesh.order();
    let nn = n * n;
    let g = mesh.global_complex();
    let mut omega = vec![0.0; g.num_surfaces()];
    let mut q_sum = vec![0.0; g.num_edges()];
    let mut q_count = vec![0u32; g.num_edges()];
    for (e, op) in sys.operators.iter().enumerate() {
        let w = nalgebra::DVector::from_column_slice(&x.x[e * nn..(e + 1) * nn]);
        let gv = nalgebra::DVector::from_iterator(
            4 * n,
            sys.ghosts[e].iter().map(|s| match *s {
                GhostSlot::Known(v) => v,
                GhostSlot::Unknown(u) => x.x[u],
            }),
        );
        let q = &op.c * &w + &op.d * &gv;
        for (l, gidx) in mesh.local_to_global(2, e).into_iter().enumerate() {
            omega[gidx] = w[l];
        }
        for (l, gidx) in mesh.local_to_global(1, e).into_iter().enumerate() {
            q_sum[gidx] += q[l];
            q_count[gidx] += 1;
        }
    }
    let q = q_sum.iter().zip(&q_count).map(|(s, c)| s / *c as f64).collect();
    Ok(Solution {
        method: Method::Dual,
        mesh: Arc::new(mesh),
        omega: Cochain::new(2, omega),
        q: Cochain::new(1, q),
        f_h: sys.f_h,
        diagnostics: Diagnostics {
            residual_inf: x.residual_inf,
            condition_estimate: x.condition_estimate,
            dof: sys.n_omega + sys.n_ghost,
            runtime_s: runtime,
        },
    })
}
