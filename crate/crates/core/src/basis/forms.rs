use std::sync::Arc;

use super::family::BasisFamily1D;
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::topology::{Cochain, TensorCellComplex};

/// Scalar function of two coordinates.
pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Wraps a closure as a [`ScalarField`].
pub fn field(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> ScalarField {
    Arc::new(f)
}

/// Smooth differential form given by its component functions.
#[derive(Clone)]
pub enum SmoothForm {
    /// `a(ξ, η)`.
    Zero(ScalarField),
    /// `a_ξ dξ + a_η dη`.
    One(ScalarField, ScalarField),
    /// `a dξ∧dη`.
    Two(ScalarField),
}

impl std::fmt::Debug for SmoothForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SmoothForm({})", self.degree())
    }
}

impl SmoothForm {
    pub fn degree(&self) -> usize {
        match self {
            SmoothForm::Zero(_) => 0,
            SmoothForm::One(..) => 1,
            SmoothForm::Two(_) => 2,
        }
    }

    /// Component values at a point.
    pub fn eval(&self, x: f64, y: f64) -> Vec<f64> {
        match self {
            SmoothForm::Zero(a) | SmoothForm::Two(a) => vec![a(x, y)],
            SmoothForm::One(a, b) => vec![a(x, y), b(x, y)],
        }
    }
}

/// Integrates `form` over every cell of matching degree.
pub fn reduce(form: &SmoothForm, complex: &TensorCellComplex, quad_order: usize) -> Result<Cochain> {
    let g = gauss_legendre(quad_order)?;
    let xs = complex.nodes_xi();
    let ys = complex.nodes_eta();
    let (nx, ny) = (complex.nx(), complex.ny());
    let coefficients = match form {
        SmoothForm::Zero(a) => {
            let mut v = Vec::with_capacity(complex.num_points());
            for &y in ys {
                for &x in xs {
                    v.push(a(x, y));
                }
            }
            v
        }
        SmoothForm::One(ax, ay) => {
            let mut v = Vec::with_capacity(complex.num_edges());
            for &y in ys {
                for i in 1..=nx {
                    v.push(g.integrate(xs[i - 1], xs[i], |t| ax(t, y)));
                }
            }
            for j in 1..=ny {
                for &x in xs {
                    v.push(g.integrate(ys[j - 1], ys[j], |t| ay(x, t)));
                }
            }
            v
        }
        SmoothForm::Two(a) => {
            let mut v = Vec::with_capacity(complex.num_surfaces());
            for j in 1..=ny {
                let (qy, wy) = g.mapped(ys[j - 1], ys[j]);
                for i in 1..=nx {
                    let (qx, wx) = g.mapped(xs[i - 1], xs[i]);
                    let mut s = 0.0;
                    for (y, wyv) in qy.iter().zip(&wy) {
                        for (x, wxv) in qx.iter().zip(&wx) {
                            s += wxv * wyv * a(*x, *y);
                        }
                    }
                    v.push(s);
                }
            }
            v
        }
    };
    Ok(Cochain::new(form.degree(), coefficients))
}

/// Polynomial k-form on the reference square spanned by tensor products of
/// nodal and edge polynomials.
///
/// Coefficients follow the cell ordering of [`TensorCellComplex`]:
///
/// * 0-form: `h_i(ξ) h_j(η)`, `i, j = 0..N`;
/// * 1-form: `ε_i(ξ) h_j(η) dξ` (`i = 1..N`, `j = 0..N`), then
///   `h_i(ξ) ε_j(η) dη` (`i = 0..N`, `j = 1..N`);
/// * 2-form: `ε_i(ξ) ε_j(η) dξ∧dη`, `i, j = 1..N`.
#[derive(Debug, Clone)]
pub struct DiscreteForm {
    degree: usize,
    fx: Arc<BasisFamily1D>,
    fy: Arc<BasisFamily1D>,
    coefficients: Vec<f64>,
}

/// Rebuilds the polynomial form whose cell integrals are `c`.
pub fn reconstruct(c: &Cochain, family: &BasisFamily1D) -> Result<DiscreteForm> {
    let f = Arc::new(family.clone());
    DiscreteForm::new(c.degree, f.clone(), f, c.coefficients.clone())
}

/// Mimetic projection: reconstruction of the reduction.
pub fn project(
    form: &SmoothForm,
    complex: &TensorCellComplex,
    family: &BasisFamily1D,
    quad_order: usize,
) -> Result<DiscreteForm> {
    if complex.nodes_xi() != family.nodes() || complex.nodes_eta() != family.nodes() {
        return Err(Error::InvalidConfig("complex nodes differ from the basis nodes".into()));
    }
    reconstruct(&reduce(form, complex, quad_order)?, family)
}

fn shape(degree: usize, nx: usize, ny: usize) -> Option<usize> {
    match degree {
        0 => Some((nx + 1) * (ny + 1)),
        1 => Some(nx * (ny + 1) + (nx + 1) * ny),
        2 => Some(nx * ny),
        _ => None,
    }
}

impl DiscreteForm {
    pub fn new(degree: usize, fx: Arc<BasisFamily1D>, fy: Arc<BasisFamily1D>, coefficients: Vec<f64>) -> Result<Self> {
        let expected = shape(degree, fx.order(), fy.order())
            .ok_or_else(|| Error::InvalidConfig(format!("form degree {degree} out of range")))?;
        if expected != coefficients.len() {
            return Err(Error::DimensionMismatch { expected, got: coefficients.len() });
        }
        Ok(DiscreteForm { degree, fx, fy, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `(rows, cols)` of each component coefficient array, η index slow.
    pub fn component_shapes(&self) -> Vec<(usize, usize)> {
        let (n, m) = (self.fx.order(), self.fy.order());
        match self.degree {
            0 => vec![(m + 1, n + 1)],
            1 => vec![(m + 1, n), (m, n + 1)],
            _ => vec![(m, n)],
        }
    }

    /// Component values at a reference point.
    pub fn eval(&self, xi: f64, eta: f64) -> Vec<f64> {
        let (n, m) = (self.fx.order(), self.fy.order());
        let c = &self.coefficients;
        match self.degree {
            0 => {
                let (hx, hy) = (self.fx.lagrange_all(xi), self.fy.lagrange_all(eta));
                vec![tensor_sum(c, &hx, &hy)]
            }
            1 => {
                let (hx, hy) = (self.fx.lagrange_all(xi), self.fy.lagrange_all(eta));
                let (ex, ey) = (self.fx.edge_all(xi), self.fy.edge_all(eta));
                let split = n * (m + 1);
                vec![tensor_sum(&c[..split], &ex, &hy), tensor_sum(&c[split..], &hx, &ey)]
            }
            _ => {
                let (ex, ey) = (self.fx.edge_all(xi), self.fy.edge_all(eta));
                vec![tensor_sum(c, &ex, &ey)]
            }
        }
    }

    /// Components of the exterior derivative at a reference point.
    pub fn d_eval(&self, xi: f64, eta: f64) -> Result<Vec<f64>> {
        let (n, m) = (self.fx.order(), self.fy.order());
        let c = &self.coefficients;
        match self.degree {
            0 => {
                let (hx, hy) = (self.fx.lagrange_all(xi), self.fy.lagrange_all(eta));
                let (dx, dy) = (self.fx.lagrange_deriv_all(xi), self.fy.lagrange_deriv_all(eta));
                Ok(vec![tensor_sum(c, &dx, &hy), tensor_sum(c, &hx, &dy)])
            }
            1 => {
                let (ex, ey) = (self.fx.edge_all(xi), self.fy.edge_all(eta));
                let (dx, dy) = (self.fx.lagrange_deriv_all(xi), self.fy.lagrange_deriv_all(eta));
                let split = n * (m + 1);
                Ok(vec![tensor_sum(&c[split..], &dx, &ey) - tensor_sum(&c[..split], &ex, &dy)])
            }
            _ => Err(Error::InvalidConfig("exterior derivative of a 2-form is zero in 2D".into())),
        }
    }
}

/// `Σ_{j,i} c[j * a.len() + i] a[i] b[j]`.
pub(crate) fn tensor_sum(c: &[f64], a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(c.len(), a.len() * b.len());
    c.chunks_exact(a.len())
        .zip(b)
        .map(|(row, bj)| bj * row.iter().zip(a).map(|(x, y)| x * y).sum::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_primal_complex;

    #[test]
    fn area_of_reference_square() {
        let c = build_primal_complex(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap();
        let r = reduce(&SmoothForm::Two(field(|_, _| 1.0)), &c, 3).unwrap();
        assert!((r.coefficients[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn sine_volume_form_over_unit_square() {
        // ∫_0^{1/2} sin(2πx) dx = 1/π; on [0,1] the positive and negative lobes
        // cancel, so reduce over [-1,1]² with coordinates shifted to [0, 1/2]².
        let c = build_primal_complex(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap();
        let pi = std::f64::consts::PI;
        let f = SmoothForm::Two(field(move |s, t| {
            let (x, y) = ((s + 1.0) / 4.0, (t + 1.0) / 4.0);
            (2.0 * pi * x).sin() * (2.0 * pi * y).sin() / 16.0
        }));
        let r = reduce(&f, &c, 20).unwrap();
        assert!((r.coefficients[0] - 1.0 / (pi * pi)).abs() < 1e-14);
    }

    #[test]
    fn reconstruct_rejects_wrong_size() {
        let f = BasisFamily1D::gll(2).unwrap();
        assert!(reconstruct(&Cochain::zeros(2, 5), &f).is_err());
        assert!(reconstruct(&Cochain::zeros(1, 12), &f).is_ok());
    }

    #[test]
    fn quadratic_derivative_by_hand() {
        // On nodes {-1,0,1}, the interpolant of ξ²η is exact; d gives 2ξη dξ + ξ² dη.
        let f = BasisFamily1D::gll(2).unwrap();
        let x = f.nodes();
        let mut c = Vec::new();
        for &b in x {
            for &a in x {
                c.push(a * a * b);
            }
        }
        let form = reconstruct(&Cochain::new(0, c), &f).unwrap();
        let d = form.d_eval(0.3, -0.6).unwrap();
        assert!((d[0] - 2.0 * 0.3 * -0.6).abs() < 1e-14);
        assert!((d[1] - 0.09).abs() < 1e-14);
    }
}
