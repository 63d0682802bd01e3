use mimetic_core::basis::field;
use mimetic_core::geometry::Domain;
use mimetic_core::harness::{manufactured_spec, solution_errors, ManufacturedSolution};
use mimetic_core::mesh::Mesh;
use mimetic_core::solvers::{
    assemble_single, dual_element_operator, solve, solve_dual, solve_single, Method, NeumannData, ProblemSpec,
};
use mimetic_core::topology::Side;
use mimetic_core::Error;

fn quadratic(method: Method, order: usize, m: usize, c: f64, domain: Domain) -> ProblemSpec {
    ProblemSpec {
        source: field(|_, _| 1.0),
        dirichlet: field(|x, y| 1.0 + (x * x + y * y) / 4.0),
        ..ProblemSpec::homogeneous(method, order, m, c, domain)
    }
}

#[test]
fn zero_data_gives_zero_solution() {
    for method in [Method::Dual, Method::Single] {
        let sol = solve(&ProblemSpec::homogeneous(method, 3, 2, 0.1, Domain::Unit)).unwrap();
        assert!(sol.omega.coefficients.iter().all(|v| v.abs() < 1e-14), "{method}");
        assert!(sol.q.coefficients.iter().all(|v| v.abs() < 1e-14), "{method}");
    }
}

#[test]
fn lowest_order_dual_operator_is_five_point_stencil() {
    // One cell of [-1,1]²: ω̃ = ω / 4 at the centre, ghosts at the side midpoints
    // one unit away, so ∫Δφ = 4 (Σ g - 4 ω̃) = -4 ω + 4 Σ g.
    let mesh = Mesh::new(1, 1, 1, 0.0, Domain::Biunit).unwrap();
    let op = dual_element_operator(&mesh, 0, 4).unwrap();
    assert_eq!(op.a.shape(), (1, 1));
    assert!((op.a[(0, 0)] + 4.0).abs() < 1e-13);
    for g in 0..4 {
        assert!((op.b[(0, g)] - 4.0).abs() < 1e-13, "ghost {g}: {}", op.b[(0, g)]);
    }
}

#[test]
fn lowest_order_hand_computed_solution() {
    // φ = 1 + (x² + y²)/4 has Δφ = 1 and φ = 5/4 at the side midpoints:
    // -4 ω + 4 · 5 = ∫ 1 = 4 gives ω = 4.
    let sol = solve_dual(&quadratic(Method::Dual, 1, 1, 0.0, Domain::Biunit)).unwrap();
    assert!((sol.omega.coefficients[0] - 4.0).abs() < 1e-13, "{}", sol.omega.coefficients[0]);
}

#[test]
fn quadratic_solution_is_reproduced() {
    // φ lies in the 2-form space for N ≥ 3 and its flux in the 1-form space.
    let exact = field(|x, y| 1.0 + (x * x + y * y) / 4.0);
    for method in [Method::Dual, Method::Single] {
        let sol = solve(&quadratic(method, 3, 2, 0.0, Domain::Unit)).unwrap();
        for &(x, y) in &[(0.1, 0.2), (0.5, 0.5), (0.77, 0.31), (0.95, 0.9)] {
            let v = sol.omega_at(x, y).unwrap();
            assert!((v - exact(x, y)).abs() < 1e-11, "{method} at ({x},{y}): {v} vs {}", exact(x, y));
        }
    }
}

#[test]
fn single_grid_matrix_is_symmetric() {
    let spec = manufactured_spec(Method::Single, 3, 2, 0.2, Domain::Unit);
    let mesh = spec.mesh().unwrap();
    let sys = assemble_single(&spec, &mesh).unwrap();
    let k = sys.matrix.to_dense();
    for (r, row) in k.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            assert!((v - k[c][r]).abs() < 1e-12 * (1.0 + v.abs()), "({r},{c})");
        }
    }
    assert_eq!(sys.n_q + sys.n_omega, k.len());
}

#[test]
fn both_methods_conserve_and_converge() {
    for method in [Method::Dual, Method::Single] {
        let coarse = solve(&manufactured_spec(method, 3, 4, 0.2, Domain::Unit)).unwrap();
        let fine = solve(&manufactured_spec(method, 3, 8, 0.2, Domain::Unit)).unwrap();
        assert!(coarse.conservation() < 1e-10 && fine.conservation() < 1e-10);
        let (wc, qc) = solution_errors(&coarse, 7).unwrap();
        let (wf, qf) = solution_errors(&fine, 7).unwrap();
        assert!(wf < wc / 4.0 && qf < qc / 4.0, "{method}: {wc} -> {wf}, {qc} -> {qf}");
        assert!(wf < 1e-2, "{method}: {wf}");
    }
}

#[test]
fn neumann_sides_match_dirichlet_solution() {
    let m = ManufacturedSolution::sine();
    let base = manufactured_spec(Method::Single, 3, 4, 0.1, Domain::Unit);
    let with_flux = ProblemSpec {
        neumann: Some(NeumannData { sides: vec![Side::East, Side::North], flux: m.flux.clone() }),
        ..base.clone()
    };
    let a = solve_single(&base).unwrap();
    let b = solve_single(&with_flux).unwrap();
    assert!(b.conservation() < 1e-10);
    let (wa, qa) = solution_errors(&a, 7).unwrap();
    let (wb, qb) = solution_errors(&b, 7).unwrap();
    assert!((wb / wa - 1.0).abs() < 0.5 && (qb / qa - 1.0).abs() < 0.5, "{wa} {wb} {qa} {qb}");
}

#[test]
fn invalid_requests_are_rejected() {
    let m = ManufacturedSolution::sine();
    let all = NeumannData { sides: vec![Side::West, Side::East, Side::South, Side::North], flux: m.flux.clone() };
    let spec = ProblemSpec { neumann: Some(all), ..manufactured_spec(Method::Single, 2, 2, 0.0, Domain::Unit) };
    assert!(matches!(solve(&spec), Err(Error::InvalidConfig(_))));
    let dual_neumann = ProblemSpec { method: Method::Dual, ..spec };
    assert!(matches!(solve(&dual_neumann), Err(Error::InvalidConfig(_))));
    assert!(solve_dual(&manufactured_spec(Method::Single, 2, 2, 0.0, Domain::Unit)).is_err());
    assert!(solve(&manufactured_spec(Method::Dual, 0, 2, 0.0, Domain::Unit)).is_err());
    assert!(solve(&manufactured_spec(Method::Dual, 2, 0, 0.0, Domain::Unit)).is_err());
    assert!(solve(&manufactured_spec(Method::Dual, 2, 2, 0.32, Domain::Unit)).is_err());
}

#[test]
fn biunit_domain_solves() {
    for method in [Method::Dual, Method::Single] {
        let sol = solve(&manufactured_spec(method, 4, 4, 0.1, Domain::Biunit)).unwrap();
        let (w, _) = solution_errors(&sol, 8).unwrap();
        assert!(w < 0.1 && sol.conservation() < 1e-10, "{method}: {w}");
    }
}
