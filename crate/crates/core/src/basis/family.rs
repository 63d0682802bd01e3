use super::quadrature::{gll_rule, GLLRule};
use crate::error::{Error, Result};

/// Nodal (Lagrange) and edge polynomials on a 1D node set.
///
/// `h_i` interpolates point values at the nodes, `ε_i` (`i = 1..N`)
/// histopolates segment integrals: `∫_{x_{p-1}}^{x_p} ε_i = δ_ip`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily1D {
    nodes: Vec<f64>,
    bary: Vec<f64>,
    /// `diff[m][j] = h_j'(x_m)`.
    diff: Vec<Vec<f64>>,
    /// `edge[m][i-1] = ε_i(x_m)`.
    edge: Vec<Vec<f64>>,
    rule: Option<GLLRule>,
}

impl BasisFamily1D {
    /// Family on the GLL nodes of order `N`.
    pub fn gll(order: usize) -> Result<Self> {
        let rule = gll_rule(order)?;
        let mut f = Self::from_nodes(&rule.nodes)?;
        f.rule = Some(rule);
        Ok(f)
    }

    /// Family on arbitrary strictly increasing nodes. A single node gives the
    /// constant family with no edge polynomials.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNodes);
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidNodes);
        }
        let n = nodes.len();
        let bary: Vec<f64> = (0..n)
            .map(|j| {
                let p: f64 = (0..n).filter(|&k| k != j).map(|k| nodes[j] - nodes[k]).product();
                1.0 / p
            })
            .collect();
        let mut diff = vec![vec![0.0; n]; n];
        for m in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                if j != m {
                    let v = (bary[j] / bary[m]) / (nodes[m] - nodes[j]);
                    diff[m][j] = v;
                    s += v;
                }
            }
            diff[m][m] = -s;
        }
        let edge = diff
            .iter()
            .map(|row| {
                let mut acc = 0.0;
                (1..n)
                    .map(|i| {
                        acc -= row[i - 1];
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(BasisFamily1D { nodes: nodes.to_vec(), bary, diff, edge, rule: None })
    }

    /// Polynomial degree `N` (one less than the node count).
    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// GLL rule when the family was built on GLL nodes.
    pub fn rule(&self) -> Option<&GLLRule> {
        self.rule.as_ref()
    }

    /// Differentiation matrix, `D[m][j] = h_j'(x_m)`.
    pub fn diff_matrix(&self) -> &[Vec<f64>] {
        &self.diff
    }

    /// All `h_i(x)` at once.
    pub fn lagrange_all(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        if let Some(k) = self.nodes.iter().position(|&v| v == x) {
            let mut out = vec![0.0; n];
            out[k] = 1.0;
            return out;
        }
        let terms: Vec<f64> = (0..n).map(|j| self.bary[j] / (x - self.nodes[j])).collect();
        let denom: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / denom).collect()
    }

    /// All `h_i'(x)`.
    pub fn lagrange_deriv_all(&self, x: f64) -> Vec<f64> {
        let h = self.lagrange_all(x);
        let n = self.nodes.len();
        (0..n).map(|j| (0..n).map(|m| h[m] * self.diff[m][j]).sum()).collect()
    }

    /// All `ε_i(x)`, `i = 1..N`, returned at positions `0..N`.
    pub fn edge_all(&self, x: f64) -> Vec<f64> {
        let h = self.lagrange_all(x);
        let n = self.order();
        (0..n).map(|i| (0..=n).map(|m| h[m] * self.edge[m][i]).sum()).collect()
    }

    /// `h_i(x)`, `0 ≤ i ≤ N`.
    pub fn lagrange(&self, i: usize, x: f64) -> Result<f64> {
        if i > self.order() {
            return Err(Error::InvalidConfig(format!("Lagrange index {i} out of range 0..={}", self.order())));
        }
        Ok(self.lagrange_all(x)[i])
    }

    /// `ε_i(x)`, `1 ≤ i ≤ N`.
    pub fn edge(&self, i: usize, x: f64) -> Result<f64> {
        if i == 0 || i > self.order() {
            return Err(Error::InvalidConfig(format!("edge index {i} out of range 1..={}", self.order())));
        }
        Ok(self.edge_all(x)[i - 1])
    }
}

/// `h_i(ξ)` of `family`.
pub fn lagrange_eval(family: &BasisFamily1D, i: usize, xi: f64) -> Result<f64> {
    family.lagrange(i, xi)
}

/// `ε_i(ξ)` of `family`.
pub fn edge_eval(family: &BasisFamily1D, i: usize, xi: f64) -> Result<f64> {
    family.edge(i, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::gauss_legendre;

    #[test]
    fn linear_family() {
        let f = BasisFamily1D::gll(1).unwrap();
        assert_eq!(f.lagrange(0, 0.0).unwrap(), 0.5);
        for x in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            assert!((f.edge(1, x).unwrap() - 0.5).abs() < 1e-15);
        }
        assert!(f.edge(0, 0.0).is_err());
        assert!(f.edge(2, 0.0).is_err());
        assert!(f.lagrange(2, 0.0).is_err());
    }

    #[test]
    fn quadratic_edge_functions_by_hand() {
        // Nodes {-1, 0, 1}: h0 = x(x-1)/2, h1 = 1-x², h2 = x(x+1)/2.
        // ε1 = -h0' = 1/2 - x, ε2 = -(h0' + h1') = 1/2 + x.
        let f = BasisFamily1D::gll(2).unwrap();
        for x in [-0.9, -0.2, 0.35, 0.77] {
            assert!((f.edge(1, x).unwrap() - (0.5 - x)).abs() < 1e-14);
            assert!((f.edge(2, x).unwrap() - (0.5 + x)).abs() < 1e-14);
            assert!((f.lagrange_deriv_all(x)[1] + 2.0 * x).abs() < 1e-14);
        }
    }

    #[test]
    fn partition_of_unity() {
        let f = BasisFamily1D::gll(4).unwrap();
        assert!((f.lagrange_all(0.3).iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(f.lagrange_deriv_all(0.3).iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn histopolation_on_arbitrary_nodes() {
        let f = BasisFamily1D::from_nodes(&[-1.0, -0.6, 0.1, 0.5, 1.0]).unwrap();
        let g = gauss_legendre(8).unwrap();
        let x = f.nodes().to_vec();
        for p in 1..x.len() {
            for i in 1..x.len() {
                let v = g.integrate(x[p - 1], x[p], |t| f.edge(i, t).unwrap());
                let e = if i == p { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-13, "p={p} i={i} v={v}");
            }
        }
    }

    #[test]
    fn rejects_unsorted_nodes() {
        assert!(BasisFamily1D::from_nodes(&[0.0, 0.0]).is_err());
        assert!(BasisFamily1D::from_nodes(&[]).is_err());
        let constant = BasisFamily1D::from_nodes(&[0.0]).unwrap();
        assert_eq!(constant.lagrange_all(0.7), vec![1.0]);
        assert!(constant.edge_all(0.7).is_empty());
    }
}
