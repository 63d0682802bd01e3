//! Oriented tensor-product cell complexes, their incidence matrices and the
//! staggered dual grid.
//!
//! Cell ordering is lexicographic with η as the slow index. For a complex with
//! `nx × ny` cells:
//!
//! * point `(i, j)`, `0 ≤ i ≤ nx`, `0 ≤ j ≤ ny` has index `j (nx+1) + i`;
//! * ξ-edge `(i, j)` joins points `(i-1, j)` and `(i, j)`, `1 ≤ i ≤ nx`, and has
//!   index `j nx + (i-1)`; all ξ-edges come first;
//! * η-edge `(i, j)` joins points `(i, j-1)` and `(i, j)`, `1 ≤ j ≤ ny`, and has
//!   index `nx (ny+1) + (j-1)(nx+1) + i`;
//! * surface `(i, j)`, `1 ≤ i ≤ nx`, `1 ≤ j ≤ ny`, has index `(j-1) nx + (i-1)`.
//!
//! Points are sinks, edges point toward increasing coordinate and surfaces are
//! oriented counter-clockwise.

use crate::error::{Error, Result};

/// Sign conventions used when building a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    /// A point receives `+1` from edges ending at it.
    pub points_are_sinks: bool,
    /// Edges point toward increasing ξ or η.
    pub edges_increasing: bool,
    /// Surfaces circulate counter-clockwise.
    pub surfaces_ccw: bool,
}

impl Orientation {
    pub const CANONICAL: Orientation = Orientation {
        points_are_sinks: true,
        edges_increasing: true,
        surfaces_ccw: true,
    };
}

/// Oriented 2D cell complex of a tensor-product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorCellComplex {
    nodes_xi: Vec<f64>,
    nodes_eta: Vec<f64>,
    orientation: Orientation,
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::InvalidNodes);
    }
    let tol = 1e-12;
    if (nodes[0] + 1.0).abs() > tol || (nodes[nodes.len() - 1] - 1.0).abs() > tol {
        return Err(Error::InvalidNodes);
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidNodes);
    }
    Ok(())
}

/// Builds the primal complex on the tensor grid `nodes_xi × nodes_eta`.
pub fn build_primal_complex(nodes_xi: &[f64], nodes_eta: &[f64]) -> Result<TensorCellComplex> {
    check_nodes(nodes_xi)?;
    check_nodes(nodes_eta)?;
    Ok(TensorCellComplex {
        nodes_xi: nodes_xi.to_vec(),
        nodes_eta: nodes_eta.to_vec(),
        orientation: Orientation::CANONICAL,
    })
}

impl TensorCellComplex {
    /// Spatial dimension.
    pub const DIM: usize = 2;

    pub fn nodes_xi(&self) -> &[f64] {
        &self.nodes_xi
    }

    pub fn nodes_eta(&self) -> &[f64] {
        &self.nodes_eta
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Cells in the ξ direction.
    pub fn nx(&self) -> usize {
        self.nodes_xi.len() - 1
    }

    /// Cells in the η direction.
    pub fn ny(&self) -> usize {
        self.nodes_eta.len() - 1
    }

    pub fn num_points(&self) -> usize {
        (self.nx() + 1) * (self.ny() + 1)
    }

    pub fn num_xi_edges(&self) -> usize {
        self.nx() * (self.ny() + 1)
    }

    pub fn num_eta_edges(&self) -> usize {
        (self.nx() + 1) * self.ny()
    }

    pub fn num_edges(&self) -> usize {
        self.num_xi_edges() + self.num_eta_edges()
    }

    pub fn num_surfaces(&self) -> usize {
        self.nx() * self.ny()
    }

    /// Number of k-cells.
    pub fn num_cells(&self, k: usize) -> usize {
        match k {
            0 => self.num_points(),
            1 => self.num_edges(),
            2 => self.num_surfaces(),
            _ => 0,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_points() as i64 - self.num_edges() as i64 + self.num_surfaces() as i64
    }

    pub fn point_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.nx() && j <= self.ny());
        j * (self.nx() + 1) + i
    }

    /// Index of the ξ-edge from point `(i-1, j)` to `(i, j)`.
    pub fn xi_edge_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.nx() && j <= self.ny());
        j * self.nx() + (i - 1)
    }

    /// Index of the η-edge from point `(i, j-1)` to `(i, j)`.
    pub fn eta_edge_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.nx() && j >= 1 && j <= self.ny());
        self.num_xi_edges() + (j - 1) * (self.nx() + 1) + i
    }

    pub fn surface_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.nx() && j >= 1 && j <= self.ny());
        (j - 1) * self.nx() + (i - 1)
    }

    /// Oriented faces of k-cell `cell` as `(face index, sign)`.
    pub fn faces(&self, k: usize, cell: usize) -> Result<Vec<(usize, i8)>> {
        let nx = self.nx();
        match k {
            1 => {
                if cell < self.num_xi_edges() {
                    let (i, j) = (cell % nx + 1, cell / nx);
                    Ok(vec![(self.point_index(i - 1, j), -1), (self.point_index(i, j), 1)])
                } else if cell < self.num_edges() {
                    let r = cell - self.num_xi_edges();
                    let (i, j) = (r % (nx + 1), r / (nx + 1) + 1);
                    Ok(vec![(self.point_index(i, j - 1), -1), (self.point_index(i, j), 1)])
                } else {
                    Err(Error::InvalidConfig(format!("edge index {cell} out of range")))
                }
            }
            2 => {
                if cell >= self.num_surfaces() {
                    return Err(Error::InvalidConfig(format!("surface index {cell} out of range")));
                }
                let (i, j) = (cell % nx + 1, cell / nx + 1);
                Ok(vec![
                    (self.xi_edge_index(i, j - 1), 1),
                    (self.xi_edge_index(i, j), -1),
                    (self.eta_edge_index(i - 1, j), -1),
                    (self.eta_edge_index(i, j), 1),
                ])
            }
            _ => Err(Error::InvalidConfig(format!("no faces for degree {k}"))),
        }
    }

    /// Incidence matrix E(k, k-1) for `k ∈ {1, 2}`.
    pub fn incidence_matrix(&self, k: usize) -> Result<IncidenceMatrix> {
        if !(1..=Self::DIM).contains(&k) {
            return Err(Error::InvalidConfig(format!("incidence degree {k} out of range 1..=2")));
        }
        let rows = self.num_cells(k);
        let mut entries = Vec::with_capacity(rows * 2 * k);
        for r in 0..rows {
            let mut f = self.faces(k, r)?;
            f.sort_unstable_by_key(|&(c, _)| c);
            entries.extend(f.into_iter().map(|(c, s)| (r, c, s)));
        }
        Ok(IncidenceMatrix { k, rows, cols: self.num_cells(k - 1), entries })
    }

    /// Discrete exterior derivative of a k-cochain.
    pub fn coboundary(&self, c: &Cochain) -> Result<Cochain> {
        if c.degree >= Self::DIM {
            return Err(Error::InvalidConfig("cannot raise the degree of a 2-cochain".into()));
        }
        check_len(self.num_cells(c.degree), c.coefficients.len())?;
        let e = self.incidence_matrix(c.degree + 1)?;
        Ok(Cochain { degree: c.degree + 1, coefficients: e.apply(&c.coefficients) })
    }

    /// Boundary of a k-chain.
    pub fn boundary(&self, a: &Chain) -> Result<Chain> {
        if a.degree == 0 || a.degree > Self::DIM {
            return Err(Error::InvalidConfig(format!("no boundary for a {}-chain", a.degree)));
        }
        check_len(self.num_cells(a.degree), a.coefficients.len())?;
        let e = self.incidence_matrix(a.degree)?;
        Ok(Chain { degree: a.degree - 1, coefficients: e.apply_transpose(&a.coefficients) })
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Sparse integer matrix of oriented face relations, stored as row-sorted triplets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    /// Degree of the row cells; columns are (k-1)-cells.
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i8)>,
}

impl IncidenceMatrix {
    /// Builds from arbitrary triplets, dropping zeros and sorting by (row, col).
    pub fn from_triplets(k: usize, rows: usize, cols: usize, mut entries: Vec<(usize, usize, i8)>) -> Self {
        entries.retain(|e| e.2 != 0);
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        IncidenceMatrix { k, rows, cols, entries }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cols]; self.rows];
        for &(r, c, s) in &self.entries {
            d[r][c] += s as i64;
        }
        d
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let t = self.entries.iter().map(|&(r, c, s)| (c, r, s)).collect();
        IncidenceMatrix::from_triplets(self.k, self.cols, self.rows, t)
    }

    /// `E x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for &(r, c, s) in &self.entries {
            y[r] += s as f64 * x[c];
        }
        y
    }

    /// `Eᵀ y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let mut x = vec![0.0; self.cols];
        for &(r, c, s) in &self.entries {
            x[c] += s as f64 * y[r];
        }
        x
    }

    /// Exact integer product `self · other`, dense.
    pub fn matmul(&self, other: &IncidenceMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.cols, other.rows);
        let b = other.to_dense();
        let mut out = vec![vec![0i64; other.cols]; self.rows];
        for &(r, c, s) in &self.entries {
            for (o, bv) in out[r].iter_mut().zip(&b[c]) {
                *o += s as i64 * bv;
            }
        }
        out
    }

    /// Entries of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let start = self.entries.partition_point(|e| e.0 < r);
        self.entries[start..].iter().take_while(move |e| e.0 == r).map(|e| (e.1, e.2))
    }

    /// Sub-matrix keeping only the listed rows and columns, renumbered in list order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> IncidenceMatrix {
        let mut rmap = vec![usize::MAX; self.rows];
        for (n, &r) in rows.iter().enumerate() {
            rmap[r] = n;
        }
        let mut cmap = vec![usize::MAX; self.cols];
        for (n, &c) in cols.iter().enumerate() {
            cmap[c] = n;
        }
        let e = self
            .entries
            .iter()
            .filter(|e| rmap[e.0] != usize::MAX && cmap[e.1] != usize::MAX)
            .map(|e| (rmap[e.0], cmap[e.1], e.2))
            .collect();
        IncidenceMatrix::from_triplets(self.k, rows.len(), cols.len(), e)
    }
}

/// Formal sum of k-cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub degree: usize,
    pub coefficients: Vec<f64>,
}

/// Real value per k-cell: a discrete k-form.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub coefficients: Vec<f64>,
}

impl Chain {
    pub fn new(degree: usize, coefficients: Vec<f64>) -> Self {
        Chain { degree, coefficients }
    }
}

impl Cochain {
    pub fn new(degree: usize, coefficients: Vec<f64>) -> Self {
        Cochain { degree, coefficients }
    }

    pub fn zeros(degree: usize, len: usize) -> Self {
        Cochain { degree, coefficients: vec![0.0; len] }
    }

    /// Duality pairing with a chain of the same degree.
    pub fn pair(&self, a: &Chain) -> Result<f64> {
        if a.degree != self.degree {
            return Err(Error::InvalidConfig("pairing requires equal degrees".into()));
        }
        check_len(self.coefficients.len(), a.coefficients.len())?;
        Ok(self.coefficients.iter().zip(&a.coefficients).map(|(x, y)| x * y).sum())
    }
}

/// Which side of the reference square a ghost point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    West,
    East,
    South,
    North,
}

/// Staggered dual grid of a primal complex, completed with ghost cells on the
/// boundary.
///
/// Dual k-cells are numbered so that interior cells share the index of their
/// primal (2-k)-cell. Ghost cells follow in a separate block:
///
/// * 0-cells: interior points (one per primal surface), then ghosts on the
///   west (`ny`), east (`ny`), south (`nx`) and north (`nx`) sides, then the four
///   corners SW, SE, NW, NE;
/// * 1-cells: one per primal edge (the primal edge rotated a quarter turn
///   counter-clockwise), then boundary ghost edges;
/// * 2-cells: one per primal point, circulating clockwise.
///
/// With these orientations `Ẽ(1,0) = E(2,1)ᵀ` and `Ẽ(2,1) = E(1,0)ᵀ` on the
/// interior block.
#[derive(Debug, Clone)]
pub struct DualGrid {
    primal: TensorCellComplex,
    dual_xi: Vec<f64>,
    dual_eta: Vec<f64>,
    extended: TensorCellComplex,
}

/// Builds the dual grid with interior nodes `dual_nodes` in both directions.
pub fn build_dual_grid(primal: &TensorCellComplex, dual_nodes: &[f64]) -> Result<DualGrid> {
    build_dual_grid_2d(primal, dual_nodes, dual_nodes)
}

/// As [`build_dual_grid`] with separate node sets per direction.
pub fn build_dual_grid_2d(primal: &TensorCellComplex, dual_xi: &[f64], dual_eta: &[f64]) -> Result<DualGrid> {
    let nx = primal.nx();
    let ny = primal.ny();
    if dual_xi.len() != nx {
        return Err(Error::DimensionMismatch { expected: nx, got: dual_xi.len() });
    }
    if dual_eta.len() != ny {
        return Err(Error::DimensionMismatch { expected: ny, got: dual_eta.len() });
    }
    let extend = |d: &[f64]| {
        let mut v = Vec::with_capacity(d.len() + 2);
        v.push(-1.0);
        v.extend_from_slice(d);
        v.push(1.0);
        v
    };
    let ext_xi = extend(dual_xi);
    let ext_eta = extend(dual_eta);
    let extended = build_primal_complex(&ext_xi, &ext_eta)?;
    Ok(DualGrid {
        primal: primal.clone(),
        dual_xi: dual_xi.to_vec(),
        dual_eta: dual_eta.to_vec(),
        extended,
    })
}

impl DualGrid {
    pub fn primal(&self) -> &TensorCellComplex {
        &self.primal
    }

    /// Interior dual nodes along ξ.
    pub fn nodes_xi(&self) -> &[f64] {
        &self.dual_xi
    }

    pub fn nodes_eta(&self) -> &[f64] {
        &self.dual_eta
    }

    /// Dual nodes along ξ including the ghost nodes at ±1.
    pub fn extended_nodes_xi(&self) -> &[f64] {
        self.extended.nodes_xi()
    }

    pub fn extended_nodes_eta(&self) -> &[f64] {
        self.extended.nodes_eta()
    }

    /// The completed dual grid viewed as a tensor complex with its own
    /// canonical orientation.
    pub fn extended_complex(&self) -> &TensorCellComplex {
        &self.extended
    }

    pub fn num_interior(&self, k: usize) -> usize {
        self.primal.num_cells(2 - k.min(2))
    }

    /// Ghost 0-cells on the sides (corners excluded).
    pub fn num_side_ghosts(&self) -> usize {
        2 * self.primal.nx() + 2 * self.primal.ny()
    }

    pub fn num_ghost_points(&self) -> usize {
        self.num_side_ghosts() + 4
    }

    pub fn num_ghost_edges(&self) -> usize {
        2 * (self.primal.nx() + 1) + 2 * (self.primal.ny() + 1)
    }

    /// Total number of dual k-cells, ghosts included.
    pub fn num_cells(&self, k: usize) -> usize {
        match k {
            0 => self.num_interior(0) + self.num_ghost_points(),
            1 => self.num_interior(1) + self.num_ghost_edges(),
            2 => self.num_interior(2),
            _ => 0,
        }
    }

    /// Index of the side ghost number `m` (0-based along the side) on `side`.
    pub fn ghost_index(&self, side: Side, m: usize) -> usize {
        let (nx, ny) = (self.primal.nx(), self.primal.ny());
        let base = self.num_interior(0);
        match side {
            Side::West => base + m,
            Side::East => base + ny + m,
            Side::South => base + 2 * ny + m,
            Side::North => base + 2 * ny + nx + m,
        }
    }

    /// Side and position of a side ghost given its index within the ghost block.
    pub fn ghost_location(&self, g: usize) -> (Side, usize) {
        let (nx, ny) = (self.primal.nx(), self.primal.ny());
        if g < ny {
            (Side::West, g)
        } else if g < 2 * ny {
            (Side::East, g - ny)
        } else if g < 2 * ny + nx {
            (Side::South, g - 2 * ny)
        } else {
            (Side::North, g - 2 * ny - nx)
        }
    }

    /// Reference coordinates of dual 0-cell `p`.
    pub fn point_coords(&self, p: usize) -> (f64, f64) {
        let (a, b) = self.extended_point_of(p);
        (self.extended.nodes_xi()[a], self.extended.nodes_eta()[b])
    }

    fn extended_point_of(&self, p: usize) -> (usize, usize) {
        let (nx, ny) = (self.primal.nx(), self.primal.ny());
        let ni = self.num_interior(0);
        if p < ni {
            return (p % nx + 1, p / nx + 1);
        }
        let g = p - ni;
        if g < self.num_side_ghosts() {
            let (side, m) = self.ghost_location(g);
            return match side {
                Side::West => (0, m + 1),
                Side::East => (nx + 1, m + 1),
                Side::South => (m + 1, 0),
                Side::North => (m + 1, ny + 1),
            };
        }
        match g - self.num_side_ghosts() {
            0 => (0, 0),
            1 => (nx + 1, 0),
            2 => (0, ny + 1),
            _ => (nx + 1, ny + 1),
        }
    }

    fn dual_point_of_extended(&self, a: usize, b: usize) -> usize {
        let (nx, ny) = (self.primal.nx(), self.primal.ny());
        let ni = self.num_interior(0);
        let interior_a = (1..=nx).contains(&a);
        let interior_b = (1..=ny).contains(&b);
        match (interior_a, interior_b) {
            (true, true) => (b - 1) * nx + (a - 1),
            (false, true) => self.ghost_index(if a == 0 { Side::West } else { Side::East }, b - 1),
            (true, false) => self.ghost_index(if b == 0 { Side::South } else { Side::North }, a - 1),
            (false, false) => {
                let corner = match (a == 0, b == 0) {
                    (true, true) => 0,
                    (false, true) => 1,
                    (true, false) => 2,
                    (false, false) => 3,
                };
                ni + self.num_side_ghosts() + corner
            }
        }
    }

    /// Dual 1-cell index and orientation sign for an edge of the extended complex.
    fn dual_edge_of_extended(&self, e: usize) -> (usize, i8) {
        let ext = &self.extended;
        let (nx, ny) = (self.primal.nx(), self.primal.ny());
        let ne = self.num_interior(1);
        let ex = ext.nx();
        if e < ext.num_xi_edges() {
            let (a, b) = (e % ex + 1, e / ex);
            if (1..=ny).contains(&b) {
                (self.primal.eta_edge_index(a - 1, b), -1)
            } else {
                (ne + if b == 0 { 0 } else { nx + 1 } + (a - 1), 1)
            }
        } else {
            let r = e - ext.num_xi_edges();
            let (a, b) = (r % (ex + 1), r / (ex + 1) + 1);
            if (1..=nx).contains(&a) {
                (self.primal.xi_edge_index(a, b - 1), 1)
            } else {
                (ne + 2 * (nx + 1) + if a == 0 { 0 } else { ny + 1 } + (b - 1), 1)
            }
        }
    }

    /// Dual incidence matrix Ẽ(k, k-1) over all dual cells, ghosts included.
    pub fn incidence_matrix(&self, k: usize) -> Result<IncidenceMatrix> {
        let ext = self.extended.incidence_matrix(k)?;
        let np = self.extended.nx() + 1;
        let mut entries = Vec::with_capacity(ext.entries.len());
        match k {
            1 => {
                for &(r, c, s) in &ext.entries {
                    let (row, sign) = self.dual_edge_of_extended(r);
                    let col = self.dual_point_of_extended(c % np, c / np);
                    entries.push((row, col, s * sign));
                }
            }
            2 => {
                let ex = self.extended.nx();
                for &(r, c, s) in &ext.entries {
                    let (a, b) = (r % ex + 1, r / ex + 1);
                    let row = self.primal.point_index(a - 1, b - 1);
                    let (col, sign) = self.dual_edge_of_extended(c);
                    entries.push((row, col, -s * sign));
                }
            }
            _ => unreachable!(),
        }
        Ok(IncidenceMatrix::from_triplets(k, self.num_cells(k), self.num_cells(k - 1), entries))
    }

    /// Ghost-column block of Ẽ(1,0) restricted to interior dual edges: rows are
    /// primal edges, columns the side ghosts in ghost-block order.
    pub fn ghost_incidence(&self) -> Result<IncidenceMatrix> {
        let e = self.incidence_matrix(1)?;
        let rows: Vec<usize> = (0..self.num_interior(1)).collect();
        let base = self.num_interior(0);
        let cols: Vec<usize> = (base..base + self.num_side_ghosts()).collect();
        Ok(e.restrict(&rows, &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cell() -> TensorCellComplex {
        build_primal_complex(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap()
    }

    #[test]
    fn single_cell_counts() {
        let c = unit_cell();
        assert_eq!((c.num_points(), c.num_edges(), c.num_surfaces()), (4, 4, 1));
    }

    #[test]
    fn single_cell_incidence_matches_hand_example() {
        let c = unit_cell();
        let e10 = c.incidence_matrix(1).unwrap().to_dense();
        assert_eq!(
            e10,
            vec![vec![-1, 1, 0, 0], vec![0, 0, -1, 1], vec![-1, 0, 1, 0], vec![0, -1, 0, 1]]
        );
        let e21 = c.incidence_matrix(2).unwrap().to_dense();
        assert_eq!(e21, vec![vec![1, -1, -1, 1]]);
        let zero = c.incidence_matrix(2).unwrap().matmul(&c.incidence_matrix(1).unwrap());
        assert!(zero.iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn coboundary_of_point_values() {
        let c = unit_cell();
        let d = c.coboundary(&Cochain::new(0, vec![1.0, 2.0, 5.0, 11.0])).unwrap();
        assert_eq!(d.coefficients, vec![1.0, 6.0, 4.0, 9.0]);
        assert!(c.coboundary(&Cochain::zeros(2, 1)).is_err());
    }

    #[test]
    fn three_by_three_counts() {
        let n = [-1.0, -0.3, 0.4, 1.0];
        let c = build_primal_complex(&n, &n).unwrap();
        assert_eq!((c.num_points(), c.num_edges(), c.num_surfaces()), (16, 24, 9));
        assert_eq!(c.euler_characteristic(), 1);
        let e = c.incidence_matrix(1).unwrap();
        for r in 0..e.rows {
            let mut s: Vec<i8> = e.row(r).map(|x| x.1).collect();
            s.sort();
            assert_eq!(s, vec![-1, 1]);
        }
    }

    #[test]
    fn rejects_bad_nodes_and_degrees() {
        assert!(build_primal_complex(&[-1.0, 0.5, 0.2, 1.0], &[-1.0, 1.0]).is_err());
        assert!(build_primal_complex(&[-0.9, 1.0], &[-1.0, 1.0]).is_err());
        assert!(build_primal_complex(&[-1.0], &[-1.0, 1.0]).is_err());
        assert!(unit_cell().incidence_matrix(0).is_err());
        assert!(unit_cell().incidence_matrix(3).is_err());
    }

    #[test]
    fn dual_grid_of_three_cells() {
        let n = [-1.0, -0.5, 0.5, 1.0];
        let p = build_primal_complex(&n, &n).unwrap();
        let d = build_dual_grid(&p, &[-0.7, 0.0, 0.7]).unwrap();
        assert_eq!(d.extended_nodes_xi().len(), 5);
        assert_eq!(d.num_interior(0), 9);
        assert_eq!(d.num_interior(1), 24);
        assert_eq!(d.num_interior(2), 16);
        assert!(build_dual_grid(&p, &[0.0, 0.5]).is_err());
    }

    #[test]
    fn single_cell_dual_has_one_point() {
        let d = build_dual_grid(&unit_cell(), &[0.0]).unwrap();
        assert_eq!(d.num_interior(0), 1);
        assert_eq!(d.point_coords(0), (0.0, 0.0));
        assert_eq!(d.point_coords(d.ghost_index(Side::West, 0)), (-1.0, 0.0));
        assert_eq!(d.point_coords(d.ghost_index(Side::North, 0)), (0.0, 1.0));
    }

    #[test]
    fn ghost_incidence_signs() {
        let n = [-1.0, 0.0, 1.0];
        let p = build_primal_complex(&n, &n).unwrap();
        let d = build_dual_grid(&p, &[-0.5, 0.5]).unwrap();
        let g = d.ghost_incidence().unwrap().to_dense();
        let base = d.num_interior(0);
        let col = |s, m| d.ghost_index(s, m) - base;
        assert_eq!(g[p.eta_edge_index(0, 1)][col(Side::West, 0)], 1);
        assert_eq!(g[p.eta_edge_index(2, 2)][col(Side::East, 1)], -1);
        assert_eq!(g[p.xi_edge_index(1, 0)][col(Side::South, 0)], -1);
        assert_eq!(g[p.xi_edge_index(2, 2)][col(Side::North, 1)], 1);
        let nnz: usize = g.iter().flatten().filter(|v| **v != 0).count();
        assert_eq!(nnz, d.num_side_ghosts());
    }
}
