use crate::basis::{gauss_legendre, reduce, tensor_sum, ScalarField, SmoothForm};
use crate::error::{Error, Result};
use crate::geometry::pullback;
use crate::mesh::Mesh;
use crate::solvers::Solution;

/// Tabulated nodal and edge polynomials at Gauss points of one direction.
struct Tables {
    x: Vec<f64>,
    w: Vec<f64>,
    h: Vec<Vec<f64>>,
    e: Vec<Vec<f64>>,
}

fn tables(mesh: &Mesh, quad_order: usize) -> Result<Tables> {
    let g = gauss_legendre(quad_order)?;
    let f = mesh.family();
    Ok(Tables {
        h: g.nodes.iter().map(|&x| f.lagrange_all(x)).collect(),
        e: g.nodes.iter().map(|&x| f.edge_all(x)).collect(),
        x: g.nodes,
        w: g.weights,
    })
}

/// `L²` distance between the reconstructed 2-form with local coefficients
/// `local(e)` and the physical density `exact`.
pub fn l2_error_2form(mesh: &Mesh, local: impl Fn(usize) -> Vec<f64>, exact: &ScalarField, quad_order: usize) -> Result<f64> {
    let t = tables(mesh, quad_order)?;
    let mut sum = 0.0;
    for e in 0..mesh.num_elements() {
        let map = mesh.element_map(e);
        let c = local(e);
        for (q, &eta) in t.x.iter().enumerate() {
            for (p, &xi) in t.x.iter().enumerate() {
                let det = map.det(xi, eta);
                let (x, y) = map.map(xi, eta);
                let d = tensor_sum(&c, &t.e[p], &t.e[q]) / det - exact(x, y);
                sum += t.w[p] * t.w[q] * d * d * det;
            }
        }
    }
    Ok(sum.sqrt())
}

/// `L²` distance between the reconstructed 1-form with local coefficients
/// `local(e)` and the physical 1-form `(exact.0) dx + (exact.1) dy`.
pub fn l2_error_1form(
    mesh: &Mesh,
    local: impl Fn(usize) -> Vec<f64>,
    exact: &(ScalarField, ScalarField),
    quad_order: usize,
) -> Result<f64> {
    let t = tables(mesh, quad_order)?;
    let n = mesh.order();
    let split = n * (n + 1);
    let mut sum = 0.0;
    for e in 0..mesh.num_elements() {
        let map = mesh.element_map(e);
        let c = local(e);
        for (q, &eta) in t.x.iter().enumerate() {
            for (p, &xi) in t.x.iter().enumerate() {
                let m = map.metric_point(xi, eta)?;
                let a = [tensor_sum(&c[..split], &t.e[p], &t.h[q]), tensor_sum(&c[split..], &t.h[p], &t.e[q])];
                let inv = m.inv;
                let (x, y) = map.map(xi, eta);
                let dx = inv[0][0] * a[0] + inv[1][0] * a[1] - (exact.0)(x, y);
                let dy = inv[0][1] * a[0] + inv[1][1] * a[1] - (exact.1)(x, y);
                sum += t.w[p] * t.w[q] * (dx * dx + dy * dy) * m.det;
            }
        }
    }
    Ok(sum.sqrt())
}

/// `L²` error of ω (2-form exact) or q (1-form exact) of a solution.
pub fn l2_error(sol: &Solution, exact: &SmoothForm, quad_order: usize) -> Result<f64> {
    match exact {
        SmoothForm::Two(f) => l2_error_2form(&sol.mesh, |e| sol.element_omega(e), f, quad_order),
        SmoothForm::One(a, b) => l2_error_1form(&sol.mesh, |e| sol.element_q(e), &(a.clone(), b.clone()), quad_order),
        SmoothForm::Zero(_) => Err(Error::InvalidConfig("solutions carry no 0-form".into())),
    }
}

/// Element-local reductions of a physical form on every element of `mesh`.
pub fn reduce_on_mesh(mesh: &Mesh, form: &SmoothForm, quad_order: usize) -> Result<Vec<Vec<f64>>> {
    (0..mesh.num_elements())
        .map(|e| Ok(reduce(&pullback(form, mesh.element_map(e)), mesh.local_complex(), quad_order)?.coefficients))
        .collect()
}

/// `L²` error of the mimetic projection `I R` of an exact 2-form density.
pub fn projection_error_2form(mesh: &Mesh, exact: &ScalarField, reduce_quad: usize, error_quad: usize) -> Result<f64> {
    let local = reduce_on_mesh(mesh, &SmoothForm::Two(exact.clone()), reduce_quad)?;
    l2_error_2form(mesh, |e| local[e].clone(), exact, error_quad)
}

/// `L²` error of the mimetic projection of an exact 1-form.
pub fn projection_error_1form(
    mesh: &Mesh,
    exact: &(ScalarField, ScalarField),
    reduce_quad: usize,
    error_quad: usize,
) -> Result<f64> {
    let local = reduce_on_mesh(mesh, &SmoothForm::One(exact.0.clone(), exact.1.clone()), reduce_quad)?;
    l2_error_1form(mesh, |e| local[e].clone(), exact, error_quad)
}
