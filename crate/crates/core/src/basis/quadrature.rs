use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Largest supported GLL order.
pub const MAX_GLL_ORDER: usize = 64;

/// Legendre polynomials `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Derivative of `P_n` at `x`, valid for `|x| < 1`.
fn legendre_deriv(n: usize, x: f64) -> f64 {
    let (p, pm) = legendre(n, x);
    n as f64 * (x * p - pm) / (x * x - 1.0)
}

/// Gauss-Lobatto-Legendre nodes and weights of order `N` (`N + 1` points).
#[derive(Debug, Clone, PartialEq)]
pub struct GLLRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// GLL rule with `N + 1` points: the roots of `(1-ξ²) P_N'(ξ)`.
pub fn gll_rule(order: usize) -> Result<GLLRule> {
    if order == 0 || order > MAX_GLL_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let n = order;
    let nf = n as f64;
    // Chebyshev-Gauss-Lobatto start, ascending.
    let mut x: Vec<f64> = (0..=n).map(|j| -(std::f64::consts::PI * j as f64 / nf).cos()).collect();
    let mut converged = false;
    for _ in 0..NEWTON_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for xj in x.iter_mut() {
            let (p, pm) = legendre(n, *xj);
            let step = (*xj * p - pm) / ((nf + 1.0) * p);
            *xj -= step;
            max_step = max_step.max(step.abs());
        }
        if max_step < NEWTON_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SolverFailure(format!("GLL Newton iteration did not converge for N = {n}")));
    }
    symmetrize(&mut x);
    x[0] = -1.0;
    x[n] = 1.0;
    let weights = x
        .iter()
        .map(|&xi| {
            let (p, _) = legendre(n, xi);
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    Ok(GLLRule { order: n, nodes: x, weights })
}

fn symmetrize(x: &mut [f64]) {
    let m = x.len();
    for j in 0..m / 2 {
        let v = 0.5 * (x[m - 1 - j] - x[j]);
        x[j] = -v;
        x[m - 1 - j] = v;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
}

impl GLLRule {
    /// `∫_{-1}^{1} f`, exact for polynomials of degree up to `2N - 1`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre rule with `n` points, exact to degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, _) = legendre(n, x);
            let step = p / legendre_deriv(n, x);
            x -= step;
            if step.abs() < NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SolverFailure(format!("Gauss Newton iteration did not converge for n = {n}")));
        }
        nodes[i] = x;
    }
    symmetrize(&mut nodes);
    for (w, &x) in weights.iter_mut().zip(&nodes) {
        let dp = legendre_deriv(n, x);
        *w = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Ok(GaussRule { nodes, weights })
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights transplanted onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        (
            self.nodes.iter().map(|&x| m + h * x).collect(),
            self.weights.iter().map(|&w| h * w).collect(),
        )
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(m + h * x)).sum::<f64>() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gll_low_orders() {
        let r = gll_rule(1).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 1.0]);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
        let r = gll_rule(2).unwrap();
        assert_eq!(r.nodes, vec![-1.0, 0.0, 1.0]);
        for (w, e) in r.weights.iter().zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn gll_order_three_nodes() {
        // Interior nodes are ±1/√5, weights 1/6 and 5/6.
        let r = gll_rule(3).unwrap();
        let s = 1.0 / 5f64.sqrt();
        for (x, e) in r.nodes.iter().zip([-1.0, -s, s, 1.0]) {
            assert!((x - e).abs() < 1e-15);
        }
        for (w, e) in r.weights.iter().zip([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0]) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn gll_rejects_bad_orders() {
        assert!(gll_rule(0).is_err());
        assert!(gll_rule(65).is_err());
        assert!(gll_rule(64).is_ok());
    }

    #[test]
    fn gll_exactness_and_weights() {
        for n in 1..=20 {
            let r = gll_rule(n).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let odd = r.integrate(|x| x.powi(2 * n as i32 - 1));
            assert!(odd.abs() < 1e-14);
            let even_deg = 2 * n - 2;
            let exact = 2.0 / (even_deg as f64 + 1.0);
            assert!((r.integrate(|x| x.powi(even_deg as i32)) - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_rule_matches_known_values() {
        let g = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((g.nodes[0] + s).abs() < 1e-15 && (g.nodes[1] - s).abs() < 1e-15);
        let g = gauss_legendre(3).unwrap();
        assert!((g.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((g.weights[1] - 8.0 / 9.0).abs() < 1e-15);
        for n in 1..=30 {
            let g = gauss_legendre(n).unwrap();
            let deg = 2 * n - 2;
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((g.integrate(-1.0, 1.0, |x| x.powi(deg as i32)) - exact).abs() < 1e-13, "n={n}");
        }
    }
}
