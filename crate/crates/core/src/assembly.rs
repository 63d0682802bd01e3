//! Element mass matrices and the explicit Hodge matrices of the dual-grid
//! method, plus sparse global assembly over a [`Mesh`].

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::{gauss_legendre, BasisFamily1D};
use crate::error::{Error, Result};
use crate::geometry::{CurvilinearMap, PointMetric};
use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::mesh::Mesh;

/// `L²` Gram matrix of the degree-k basis on one element.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix {
    pub degree: usize,
    pub matrix: DMatrix<f64>,
}

/// Which grid a cochain lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Primal,
    Dual,
}

/// Discrete Hodge star mapping k-cochains on one grid to (2-k)-cochains on the other.
#[derive(Debug, Clone, PartialEq)]
pub struct HodgeMatrix {
    pub source: (usize, Grid),
    pub target: (usize, Grid),
    pub matrix: DMatrix<f64>,
}

/// Nodal and edge polynomials sampled on a 1D point set.
struct Table {
    x: Vec<f64>,
    w: Vec<f64>,
    h: Vec<Vec<f64>>,
    e: Vec<Vec<f64>>,
}

impl Table {
    fn new(family: &BasisFamily1D, x: Vec<f64>, w: Vec<f64>) -> Self {
        let h = x.iter().map(|&t| family.lagrange_all(t)).collect();
        let e = x.iter().map(|&t| family.edge_all(t)).collect();
        Table { x, w, h, e }
    }

    fn gauss(family: &BasisFamily1D, n: usize, a: f64, b: f64) -> Result<Self> {
        let (x, w) = gauss_legendre(n)?.mapped(a, b);
        Ok(Self::new(family, x, w))
    }
}

fn check_quad(quad_order: usize, n: usize) -> Result<()> {
    if quad_order < n + 1 {
        return Err(Error::InvalidConfig(format!("quadrature order {quad_order} too low for N = {n}")));
    }
    Ok(())
}

/// Mass matrix of the degree-k basis under `map`, by tensor Gauss quadrature.
pub fn mass_matrix(k: usize, family: &BasisFamily1D, map: &CurvilinearMap, quad_order: usize) -> Result<MassMatrix> {
    let n = family.order();
    check_quad(quad_order, n)?;
    let t = Table::gauss(family, quad_order, -1.0, 1.0)?;
    let size = match k {
        0 => (n + 1) * (n + 1),
        1 => 2 * n * (n + 1),
        2 => n * n,
        _ => return Err(Error::InvalidConfig(format!("mass matrix degree {k} out of range"))),
    };
    let mut m = DMatrix::<f64>::zeros(size, size);
    let mut bx = vec![0.0; n * (n + 1)];
    let mut by = vec![0.0; n * (n + 1)];
    let mut b = vec![0.0; size];
    for (q, &eta) in t.x.iter().enumerate() {
        for (p, &xi) in t.x.iter().enumerate() {
            let g = map.metric_point(xi, eta)?;
            let w = t.w[p] * t.w[q];
            match k {
                0 => {
                    for j in 0..=n {
                        for i in 0..=n {
                            b[j * (n + 1) + i] = t.h[p][i] * t.h[q][j];
                        }
                    }
                    add_outer(&mut m, &b, &b, w * g.det);
                }
                1 => {
                    for j in 0..=n {
                        for i in 0..n {
                            bx[j * n + i] = t.e[p][i] * t.h[q][j];
                        }
                    }
                    for j in 0..n {
                        for i in 0..=n {
                            by[j * (n + 1) + i] = t.h[p][i] * t.e[q][j];
                        }
                    }
                    let s = n * (n + 1);
                    let wd = w * g.det;
                    add_block(&mut m, 0, 0, &bx, &bx, wd * g.ginv[0][0]);
                    add_block(&mut m, 0, s, &bx, &by, wd * g.ginv[0][1]);
                    add_block(&mut m, s, 0, &by, &bx, wd * g.ginv[1][0]);
                    add_block(&mut m, s, s, &by, &by, wd * g.ginv[1][1]);
                }
                _ => {
                    for j in 0..n {
                        for i in 0..n {
                            b[j * n + i] = t.e[p][i] * t.e[q][j];
                        }
                    }
                    add_outer(&mut m, &b, &b, w / g.det);
                }
            }
        }
    }
    Ok(MassMatrix { degree: k, matrix: m })
}

fn add_outer(m: &mut DMatrix<f64>, a: &[f64], b: &[f64], s: f64) {
    add_block(m, 0, 0, a, b, s);
}

fn add_block(m: &mut DMatrix<f64>, r0: usize, c0: usize, a: &[f64], b: &[f64], s: f64) {
    if s == 0.0 {
        return;
    }
    for (c, &bc) in b.iter().enumerate() {
        let f = s * bc;
        if f == 0.0 {
            continue;
        }
        let mut col = m.column_mut(c0 + c);
        for (r, &ar) in a.iter().enumerate() {
            col[r0 + r] += ar * f;
        }
    }
}

/// Nodal families of the dual grid: `extended` on `[-1, dual nodes, 1]`, whose
/// edge polynomials carry differences along a direction, and `interior` on the
/// dual nodes alone, used across it.
#[derive(Debug, Clone)]
pub struct DualBasis {
    pub extended: BasisFamily1D,
    pub interior: BasisFamily1D,
}

impl DualBasis {
    pub fn from_nodes(dual_nodes: &[f64]) -> Result<Self> {
        if dual_nodes.iter().any(|&x| !(x > -1.0 && x < 1.0)) {
            return Err(Error::InvalidConfig("dual nodes must lie strictly inside (-1, 1)".into()));
        }
        let mut ext = Vec::with_capacity(dual_nodes.len() + 2);
        ext.push(-1.0);
        ext.extend_from_slice(dual_nodes);
        ext.push(1.0);
        Ok(DualBasis { extended: BasisFamily1D::from_nodes(&ext)?, interior: BasisFamily1D::from_nodes(dual_nodes)? })
    }

    /// Dual nodes at the `N` Gauss-Legendre points.
    pub fn gauss(n: usize) -> Result<Self> {
        Self::from_nodes(&gauss_legendre(n)?.nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        self.interior.nodes()
    }
}

/// Samples `⋆` of the reconstructed primal 2-form at the dual nodes:
/// `ω̃_ij = Σ_kl ω_kl ε_k(ξ̃_i) ε_l(η̃_j) / det J(ξ̃_i, η̃_j)`.
pub fn hodge_02(family: &BasisFamily1D, dual_nodes: &[f64], map: &CurvilinearMap) -> Result<HodgeMatrix> {
    let n = family.order();
    if dual_nodes.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dual_nodes.len() });
    }
    let e: Vec<Vec<f64>> = dual_nodes.iter().map(|&x| family.edge_all(x)).collect();
    let mut m = DMatrix::<f64>::zeros(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let det = map.metric_point(dual_nodes[i], dual_nodes[j])?.det;
            let row = j * n + i;
            for l in 0..n {
                for k in 0..n {
                    m[(row, l * n + k)] = e[i][k] * e[j][l] / det;
                }
            }
        }
    }
    Ok(HodgeMatrix { source: (2, Grid::Primal), target: (0, Grid::Dual), matrix: m })
}

/// Reduces `⋆` of the dual 0-form `Σ ω̃_ij ȟ_i(ξ) ȟ_j(η)` on primal surfaces.
pub fn hodge_20(
    dual: &DualBasis,
    family: &BasisFamily1D,
    map: &CurvilinearMap,
    quad_order: usize,
) -> Result<HodgeMatrix> {
    let n = family.order();
    if dual.nodes().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dual.nodes().len() });
    }
    let nodes = family.nodes();
    let g = gauss_legendre(quad_order)?;
    let mut m = DMatrix::<f64>::zeros(n * n, n * n);
    for l in 0..n {
        let (qy, wy) = g.mapped(nodes[l], nodes[l + 1]);
        for k in 0..n {
            let (qx, wx) = g.mapped(nodes[k], nodes[k + 1]);
            let row = l * n + k;
            for (y, wyv) in qy.iter().zip(&wy) {
                let hy = dual.interior.lagrange_all(*y);
                for (x, wxv) in qx.iter().zip(&wx) {
                    let hx = dual.interior.lagrange_all(*x);
                    let s = wxv * wyv * map.metric_point(*x, *y)?.det;
                    for j in 0..n {
                        for i in 0..n {
                            m[(row, j * n + i)] += s * hx[i] * hy[j];
                        }
                    }
                }
            }
        }
    }
    Ok(HodgeMatrix { source: (0, Grid::Dual), target: (2, Grid::Primal), matrix: m })
}

/// Maps a dual 1-cochain (indexed by the primal edges it crosses) to the primal
/// 1-cochain of `⋆` of its reconstruction.
///
/// The dual edge crossing primal η-edge `(i, j)` carries minus the ξ-difference
/// of the dual 0-cochain between extended points `i` and `i+1`; the dual edge
/// crossing primal ξ-edge `(i, j)` carries the η-difference between extended
/// points `j` and `j+1`. The reconstruction is
/// `β = Σ Δξ ẽ(ξ) ȟ(η) dξ + Σ Δη ȟ(ξ) ẽ(η) dη` and
/// `⋆β = -det (g⁻¹β)_η dξ + det (g⁻¹β)_ξ dη`.
pub fn hodge_11_dual_to_primal(
    dual: &DualBasis,
    family: &BasisFamily1D,
    map: &CurvilinearMap,
    quad_order: usize,
) -> Result<HodgeMatrix> {
    let n = family.order();
    if dual.nodes().len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dual.nodes().len() });
    }
    check_quad(quad_order, n)?;
    let nodes = family.nodes();
    let n_xi = n * (n + 1);
    let size = 2 * n_xi;
    let g = gauss_legendre(quad_order)?;
    let mut m = DMatrix::<f64>::zeros(size, size);
    let xi_edge = |i: usize, j: usize| j * n + (i - 1);
    let eta_edge = |i: usize, j: usize| n_xi + (j - 1) * (n + 1) + i;

    // Components of β for every column at one point.
    let columns = |xi: f64, eta: f64, out_x: &mut [f64], out_y: &mut [f64]| {
        let ex = dual.extended.edge_all(xi);
        let ey = dual.extended.edge_all(eta);
        let hx = dual.interior.lagrange_all(xi);
        let hy = dual.interior.lagrange_all(eta);
        out_x.iter_mut().for_each(|v| *v = 0.0);
        out_y.iter_mut().for_each(|v| *v = 0.0);
        for j in 1..=n {
            for i in 0..=n {
                out_x[eta_edge(i, j)] = -ex[i] * hy[j - 1];
            }
        }
        for j in 0..=n {
            for i in 1..=n {
                out_y[xi_edge(i, j)] = hx[i - 1] * ey[j];
            }
        }
    };

    let mut bx = vec![0.0; size];
    let mut by = vec![0.0; size];
    let mut accumulate = |row: usize, pts: &[(f64, f64, f64)], component: usize| -> Result<()> {
        for &(xi, eta, w) in pts {
            let PointMetric { det, ginv, .. } = map.metric_point(xi, eta)?;
            columns(xi, eta, &mut bx, &mut by);
            for col in 0..size {
                let v = if component == 0 {
                    -det * (ginv[1][0] * bx[col] + ginv[1][1] * by[col])
                } else {
                    det * (ginv[0][0] * bx[col] + ginv[0][1] * by[col])
                };
                m[(row, col)] += w * v;
            }
        }
        Ok(())
    };

    for j in 0..=n {
        for i in 1..=n {
            let (qx, wx) = g.mapped(nodes[i - 1], nodes[i]);
            let pts: Vec<_> = qx.iter().zip(&wx).map(|(&x, &w)| (x, nodes[j], w)).collect();
            accumulate(xi_edge(i, j), &pts, 0)?;
        }
    }
    for j in 1..=n {
        for i in 0..=n {
            let (qy, wy) = g.mapped(nodes[j - 1], nodes[j]);
            let pts: Vec<_> = qy.iter().zip(&wy).map(|(&y, &w)| (nodes[i], y, w)).collect();
            accumulate(eta_edge(i, j), &pts, 1)?;
        }
    }
    Ok(HodgeMatrix { source: (1, Grid::Dual), target: (1, Grid::Primal), matrix: m })
}

/// Global sparse mass matrix of degree k over all elements of `mesh`.
pub fn assemble_mass(mesh: &Mesh, k: usize, quad_order: usize) -> Result<CsrMatrix> {
    let locals: Vec<MassMatrix> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| mass_matrix(k, mesh.family(), mesh.element_map(e), quad_order))
        .collect::<Result<_>>()?;
    let n = mesh.global_complex().num_cells(k);
    let mut t = TripletBuilder::new(n, n);
    for (e, m) in locals.iter().enumerate() {
        let l2g = mesh.local_to_global(k, e);
        for c in 0..m.matrix.ncols() {
            for r in 0..m.matrix.nrows() {
                t.push(l2g[r], l2g[c], m.matrix[(r, c)]);
            }
        }
    }
    Ok(t.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{crazy_map, Rect};

    fn identity() -> CurvilinearMap {
        crazy_map(0.0, Rect::BIUNIT).unwrap()
    }

    #[test]
    fn linear_nodal_mass_is_tensor_of_1d() {
        let f = BasisFamily1D::gll(1).unwrap();
        let m = mass_matrix(0, &f, &identity(), 4).unwrap().matrix;
        let m1 = [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        for a in 0..4 {
            for b in 0..4 {
                let e = m1[a % 2][b % 2] * m1[a / 2][b / 2];
                assert!((m[(a, b)] - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_surface_mass() {
        let f = BasisFamily1D::gll(1).unwrap();
        let m = mass_matrix(2, &f, &identity(), 4).unwrap().matrix;
        assert!((m[(0, 0)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn area_form_has_unit_dual_values() {
        let f = BasisFamily1D::gll(1).unwrap();
        let h = hodge_02(&f, &[0.0], &identity()).unwrap().matrix;
        assert!((h[(0, 0)] * 4.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_inputs() {
        let f = BasisFamily1D::gll(3).unwrap();
        assert!(mass_matrix(3, &f, &identity(), 6).is_err());
        assert!(hodge_02(&f, &[0.0], &identity()).is_err());
        assert!(DualBasis::from_nodes(&[-1.0, 0.0]).is_err());
    }
}
