//! Sparse matrices and a direct banded LU solver.
//!
//! The solver reorders the unknowns with reverse Cuthill-McKee, then factors
//! the permuted matrix in LAPACK-style band storage with partial pivoting.
//! Pivoting handles the zero diagonal block of saddle point systems.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

/// Accumulates `(row, col, value)` entries; duplicates are summed.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        TripletBuilder { rows, cols, entries: Vec::new() }
    }

    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        if v != 0.0 {
            self.entries.push((r, c, v));
        }
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = (usize, usize, f64)>) {
        for (r, c, v) in other {
            self.push(r, c, v);
        }
    }

    pub fn build(mut self) -> CsrMatrix {
        self.entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut indptr = vec![0usize; self.rows + 1];
        let mut indices = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..self.rows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { rows: self.rows, cols: self.cols, indptr, indices, values }
    }
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    /// `Aᵀ y`.
    pub fn mul_vec_transpose(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, yr) in y.iter().enumerate() {
            for (c, v) in self.row(r) {
                out[c] += v * yr;
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (r, row) in d.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] += v;
            }
        }
        d
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Reverse Cuthill-McKee ordering of the symmetrised pattern of `a`.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.rows;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in 0..n {
        for (c, _) in a.row(r) {
            if c != r {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize, visited: &[bool]| -> Vec<Vec<usize>> {
        let mut seen = visited.to_vec();
        seen[start] = true;
        let mut levels = vec![vec![start]];
        loop {
            let mut next = Vec::new();
            for &u in levels.last().unwrap() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    };

    while order.len() < n {
        let mut start = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap();
        // Pseudo-peripheral start node.
        let mut depth = 0;
        for _ in 0..5 {
            let levels = bfs_levels(start, &visited);
            if levels.len() <= depth {
                break;
            }
            depth = levels.len();
            start = *levels.last().unwrap().iter().min_by_key(|&&v| degree[v]).unwrap();
        }
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            nb.sort_by_key(|&v| (degree[v], v));
            for v in nb {
                visited[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    order
}

/// LU factorisation `P A Pᵀ = L U` of a reordered banded matrix, with row
/// pivoting inside the band.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
    perm: Vec<usize>,
    pivot_ratio: f64,
}

impl BandedLu {
    /// Factors a square sparse matrix.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::DimensionMismatch { expected: a.rows, got: a.cols });
        }
        let n = a.rows;
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for r in 0..n {
            for (c, _) in a.row(r) {
                let (i, j) = (inv[r], inv[c]);
                if i > j {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
        let kv = kl + ku;
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![0.0; ldab * n];
        for r in 0..n {
            for (c, v) in a.row(r) {
                let (i, j) = (inv[r], inv[c]);
                ab[j * ldab + kv + i - j] += v;
            }
        }
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        let (mut pmax, mut pmin) = (0.0f64, f64::INFINITY);
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ldab + kv;
            let mut jp = 0;
            let mut best = ab[col].abs();
            for r in 1..=km {
                let v = ab[col + r].abs();
                if v > best {
                    best = v;
                    jp = r;
                }
            }
            ipiv[j] = j + jp;
            if best == 0.0 {
                return Err(Error::SingularSystem(perm[j]));
            }
            pmax = pmax.max(best);
            pmin = pmin.min(best);
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let base = c * ldab + kv;
                    ab.swap(base + j - c + jp, base + j - c);
                }
            }
            let piv = ab[col];
            for r in 1..=km {
                ab[col + r] /= piv;
            }
            for c in j + 1..=ju {
                let cbase = c * ldab + kv;
                let ujc = ab[cbase + j - c];
                if ujc != 0.0 {
                    for r in 1..=km {
                        let l = ab[col + r];
                        ab[cbase + j + r - c] -= l * ujc;
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, ldab, ab, ipiv, perm, pivot_ratio: pmax / pmin })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Lower and upper bandwidth after reordering.
    pub fn bandwidth(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Ratio of largest to smallest pivot magnitude; a cheap lower-quality
    /// condition indicator.
    pub fn condition_estimate(&self) -> f64 {
        self.pivot_ratio
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let (n, kl, ldab) = (self.n, self.kl, self.ldab);
        let kv = self.kl + self.ku;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                y.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let yj = y[j];
            if yj != 0.0 {
                let col = j * ldab + kv;
                for r in 1..=km {
                    y[j + r] -= self.ab[col + r] * yj;
                }
            }
        }
        for j in (0..n).rev() {
            let col = j * ldab + kv;
            y[j] /= self.ab[col];
            let yj = y[j];
            if yj != 0.0 {
                let top = j.saturating_sub(kv);
                for i in top..j {
                    y[i] -= self.ab[col + i - j] * yj;
                }
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

/// Result of a direct solve with one step of iterative refinement.
#[derive(Debug, Clone)]
pub struct DirectSolve {
    pub x: Vec<f64>,
    pub residual_inf: f64,
    pub condition_estimate: f64,
}

/// Solves `A x = b` by banded LU plus iterative refinement.
pub fn solve_direct(a: &CsrMatrix, b: &[f64]) -> Result<DirectSolve> {
    let lu = BandedLu::factor(a)?;
    let mut x = lu.solve(b);
    let mut res: Vec<f64> = a.mul_vec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
    for _ in 0..2 {
        let dx = lu.solve(&res);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        res = a.mul_vec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SolverFailure("non-finite solution".into()));
    }
    let residual_inf = res.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(DirectSolve { x, residual_inf, condition_estimate: lu.condition_estimate() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(n: usize, seed: u64) -> CsrMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = TripletBuilder::new(n, n);
        for i in 0..n {
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                t.push(i, j, rng.gen_range(-1.0..1.0));
            }
            t.push(i, (i * 7 + 3) % n, 0.5);
        }
        t.build()
    }

    fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
        let n = a.rows;
        let d = a.to_dense();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| d[i][j]);
        let v = nalgebra::DVector::from_column_slice(b);
        m.lu().solve(&v).unwrap().iter().copied().collect()
    }

    #[test]
    fn matches_dense_lu_on_random_matrices() {
        for seed in 0..20 {
            let a = random_sparse(40, seed);
            let b: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
            let s = solve_direct(&a, &b).unwrap();
            let x = dense_solve(&a, &b);
            let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (p, q) in s.x.iter().zip(&x) {
                assert!((p - q).abs() < 1e-9 * scale, "seed {seed}");
            }
        }
    }

    #[test]
    fn saddle_point_needs_pivoting() {
        // [[2, 1], [1, 0]] has a zero in the second diagonal position.
        let mut t = TripletBuilder::new(3, 3);
        t.extend([(0, 0, 0.0), (0, 2, 1.0), (1, 1, 3.0), (2, 0, 1.0), (0, 0, 2.0)]);
        let a = t.build();
        let x = solve_direct(&a, &[3.0, 6.0, 1.0]).unwrap().x;
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14 && (x[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut t = TripletBuilder::new(2, 2);
        t.extend([(0, 0, 1.0), (0, 1, 1.0), (1, 0, 2.0), (1, 1, 2.0)]);
        assert!(matches!(BandedLu::factor(&t.build()), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn rcm_reduces_bandwidth_of_shuffled_path() {
        let n = 50;
        let mut t = TripletBuilder::new(n, n);
        let label = |i: usize| (i * 17) % n;
        for i in 0..n {
            t.push(label(i), label(i), 4.0);
            if i + 1 < n {
                t.push(label(i), label(i + 1), -1.0);
                t.push(label(i + 1), label(i), -1.0);
            }
        }
        let lu = BandedLu::factor(&t.build()).unwrap();
        assert_eq!(lu.bandwidth(), (1, 1));
    }

    #[test]
    fn duplicates_are_summed() {
        let mut t = TripletBuilder::new(2, 2);
        t.extend([(0, 1, 1.0), (0, 1, 2.5), (1, 0, -1.0)]);
        let a = t.build();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.to_dense(), vec![vec![0.0, 3.5], vec![-1.0, 0.0]]);
        assert_eq!(a.mul_vec_transpose(&[1.0, 2.0]), vec![-2.0, 3.5]);
    }
}
