//! Multi-element tensor meshes: element maps and local-to-global numbering.

use std::sync::Arc;

use crate::basis::BasisFamily1D;
use crate::error::{Error, Result};
use crate::geometry::{CurvilinearMap, Domain, Rect};
use crate::topology::{build_primal_complex, TensorCellComplex};

/// `mx × my` deformed spectral elements of order `N` tiling a domain.
///
/// Element `(ex, ey)` has index `ey * mx + ex`. The global complex is the
/// tensor complex on the concatenated GLL nodes of all elements, in canonical
/// `[-1,1]` coordinates, so interface cells are shared and edge orientations
/// agree between neighbours.
#[derive(Debug, Clone)]
pub struct Mesh {
    order: usize,
    mx: usize,
    my: usize,
    c: f64,
    domain: Domain,
    family: Arc<BasisFamily1D>,
    local: TensorCellComplex,
    global: TensorCellComplex,
    maps: Vec<CurvilinearMap>,
    global_map: CurvilinearMap,
}

impl Mesh {
    pub fn new(order: usize, mx: usize, my: usize, c: f64, domain: Domain) -> Result<Self> {
        if mx == 0 || my == 0 {
            return Err(Error::InvalidConfig("element counts must be at least 1".into()));
        }
        let family = Arc::new(BasisFamily1D::gll(order)?);
        let nodes = family.nodes().to_vec();
        let local = build_primal_complex(&nodes, &nodes)?;
        let concat = |m: usize| {
            let mut v = Vec::with_capacity(m * order + 1);
            for e in 0..m {
                let (a, b) = (edge_coord(e, m), edge_coord(e + 1, m));
                let start = if e == 0 { 0 } else { 1 };
                for &x in &nodes[start..] {
                    v.push(a + 0.5 * (x + 1.0) * (b - a));
                }
                let last = v.len() - 1;
                v[last] = b;
            }
            v
        };
        let global = build_primal_complex(&concat(mx), &concat(my))?;
        let rect = domain.rect();
        let mut maps = Vec::with_capacity(mx * my);
        for ey in 0..my {
            for ex in 0..mx {
                let r = Rect::new(edge_coord(ex, mx), edge_coord(ex + 1, mx), edge_coord(ey, my), edge_coord(ey + 1, my));
                maps.push(CurvilinearMap::new(c, r, rect)?);
            }
        }
        let global_map = CurvilinearMap::new(c, Rect::BIUNIT, rect)?;
        Ok(Mesh { order, mx, my, c, domain, family, local, global, maps, global_map })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn my(&self) -> usize {
        self.my
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn num_elements(&self) -> usize {
        self.mx * self.my
    }

    pub fn family(&self) -> &Arc<BasisFamily1D> {
        &self.family
    }

    /// Complex of one element on the reference square.
    pub fn local_complex(&self) -> &TensorCellComplex {
        &self.local
    }

    pub fn global_complex(&self) -> &TensorCellComplex {
        &self.global
    }

    pub fn element_map(&self, e: usize) -> &CurvilinearMap {
        &self.maps[e]
    }

    /// `(ex, ey)` of element `e`.
    pub fn element_coords(&self, e: usize) -> (usize, usize) {
        (e % self.mx, e / self.mx)
    }

    /// Global index of every local k-cell of element `e`, in local order.
    pub fn local_to_global(&self, k: usize, e: usize) -> Vec<usize> {
        let n = self.order;
        let (ex, ey) = self.element_coords(e);
        let (ox, oy) = (ex * n, ey * n);
        let g = &self.global;
        match k {
            0 => {
                let mut v = Vec::with_capacity((n + 1) * (n + 1));
                for j in 0..=n {
                    for i in 0..=n {
                        v.push(g.point_index(ox + i, oy + j));
                    }
                }
                v
            }
            1 => {
                let mut v = Vec::with_capacity(2 * n * (n + 1));
                for j in 0..=n {
                    for i in 1..=n {
                        v.push(g.xi_edge_index(ox + i, oy + j));
                    }
                }
                for j in 1..=n {
                    for i in 0..=n {
                        v.push(g.eta_edge_index(ox + i, oy + j));
                    }
                }
                v
            }
            2 => {
                let mut v = Vec::with_capacity(n * n);
                for j in 1..=n {
                    for i in 1..=n {
                        v.push(g.surface_index(ox + i, oy + j));
                    }
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// Element and reference coordinates of a physical point.
    pub fn locate(&self, x: f64, y: f64) -> Result<(usize, f64, f64)> {
        let (s, t) = self.global_map.inverse(x, y)?;
        let s = s.clamp(-1.0, 1.0);
        let t = t.clamp(-1.0, 1.0);
        let cell = |v: f64, m: usize| (((v + 1.0) * 0.5 * m as f64).floor() as usize).min(m - 1);
        let (ex, ey) = (cell(s, self.mx), cell(t, self.my));
        let local = |v: f64, k: usize, m: usize| {
            let (a, b) = (edge_coord(k, m), edge_coord(k + 1, m));
            (2.0 * (v - a) / (b - a) - 1.0).clamp(-1.0, 1.0)
        };
        Ok((ey * self.mx + ex, local(s, ex, self.mx), local(t, ey, self.my)))
    }

    /// Element size `h = 1 / elements per side` along ξ.
    pub fn h(&self) -> f64 {
        1.0 / self.mx as f64
    }
}

fn edge_coord(k: usize, m: usize) -> f64 {
    if k == m {
        1.0
    } else {
        -1.0 + 2.0 * k as f64 / m as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_counts_and_sharing() {
        let m = Mesh::new(2, 3, 2, 0.1, Domain::Unit).unwrap();
        let g = m.global_complex();
        assert_eq!((g.nx(), g.ny()), (6, 4));
        let mut seen = vec![0usize; g.num_edges()];
        for e in 0..m.num_elements() {
            for idx in m.local_to_global(1, e) {
                seen[idx] += 1;
            }
        }
        // Interior interface edges are shared by exactly two elements.
        let shared = seen.iter().filter(|&&c| c == 2).count();
        assert_eq!(shared, 2 * 2 * 2 + 3 * 2);
        assert!(seen.iter().all(|&c| c >= 1));
    }

    #[test]
    fn neighbouring_maps_agree_on_interfaces() {
        let m = Mesh::new(3, 2, 2, 0.2, Domain::Unit).unwrap();
        for t in [-1.0, -0.3, 0.6, 1.0] {
            let a = m.element_map(0).map(1.0, t);
            let b = m.element_map(1).map(-1.0, t);
            assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
        }
    }

    #[test]
    fn locate_inverts_element_maps() {
        let m = Mesh::new(3, 4, 4, 0.2, Domain::Unit).unwrap();
        for e in [0, 5, 15] {
            let (x, y) = m.element_map(e).map(0.3, -0.4);
            let (f, a, b) = m.locate(x, y).unwrap();
            assert_eq!(f, e);
            assert!((a - 0.3).abs() < 1e-12 && (b + 0.4).abs() < 1e-12);
        }
    }
}
