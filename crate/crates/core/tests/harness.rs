use std::f64::consts::PI;

use mimetic_core::basis::{field, SmoothForm};
use mimetic_core::geometry::Domain;
use mimetic_core::harness::{
    l2_error_1form, l2_error_2form, manufactured_problem, manufactured_spec, method_difference,
    projection_error_2form, reduce_on_mesh, run_h_convergence, run_p_convergence, write_csv, ExperimentConfig,
    ManufacturedSolution,
};
use mimetic_core::mesh::Mesh;
use mimetic_core::solvers::{solve, Method};

#[test]
fn manufactured_fields() {
    let m = ManufacturedSolution::sine();
    assert!(((m.phi)(0.25, 0.25) - 1.0).abs() < 1e-15);
    // Unit square boundary: sin 2πx vanishes at 0 and 1.
    for t in [0.0, 0.13, 0.5, 0.91, 1.0] {
        for (x, y) in [(0.0, t), (1.0, t), (t, 0.0), (t, 1.0)] {
            assert!((m.phi)(x, y).abs() < 1e-15);
        }
    }
    // Five-point Laplacian of φ against f.
    let h = 1e-4;
    for &(x, y) in &[(0.1, 0.7), (0.33, 0.45)] {
        let lap = ((m.phi)(x + h, y) + (m.phi)(x - h, y) + (m.phi)(x, y + h) + (m.phi)(x, y - h) - 4.0 * (m.phi)(x, y))
            / (h * h);
        assert!((lap - (m.source)(x, y)).abs() < 1e-4 * 8.0 * PI * PI);
        let qx = -((m.phi)(x, y + h) - (m.phi)(x, y - h)) / (2.0 * h);
        assert!((qx - (m.flux.0)(x, y)).abs() < 1e-6);
    }
    let spec = manufactured_problem(Domain::Biunit, 0.1);
    assert_eq!((spec.c, spec.domain), (0.1, Domain::Biunit));
}

#[test]
fn error_of_zero_field_is_norm_of_exact() {
    // ∫∫ sin²2πx sin²2πy = 1/4 and ∫∫ |∇φ|² = 2 (2π)² / 4 = 2π² on the unit square.
    let m = ManufacturedSolution::sine();
    for c in [0.0, 0.2] {
        let mesh = Mesh::new(4, 3, 3, c, Domain::Unit).unwrap();
        let w = l2_error_2form(&mesh, |_| vec![0.0; 16], &m.phi, 20).unwrap();
        let q = l2_error_1form(&mesh, |_| vec![0.0; 40], &m.flux, 20).unwrap();
        assert!((w - 0.5).abs() < 1e-12, "{w}");
        assert!((q - PI * 2f64.sqrt()).abs() < 1e-11, "{q}");
    }
}

#[test]
fn error_of_discrete_field_against_itself_vanishes() {
    let mesh = Mesh::new(3, 2, 2, 0.15, Domain::Unit).unwrap();
    let poly = field(|x, y| 1.0 + x - 2.0 * y * y);
    let zero = field(|_, _| 0.0);
    assert!(l2_error_2form(&mesh, |_| vec![0.0; 9], &zero, 7).unwrap() == 0.0);
    // A smooth density outside the space: the projection error is positive,
    // independent of the reduction quadrature, and the default error
    // quadrature is accurate to a few parts in 1e5 on deformed elements.
    let reference = projection_error_2form(&mesh, &poly, 16, 20).unwrap();
    let low_reduce = projection_error_2form(&mesh, &poly, 8, 20).unwrap();
    let default_error = projection_error_2form(&mesh, &poly, 8, 7).unwrap();
    assert!(reference > 0.0);
    assert!((low_reduce - reference).abs() < 1e-12, "{low_reduce} {reference}");
    assert!((default_error - reference).abs() < 1e-4 * reference, "{default_error} {reference}");
    // An undeformed element represents ω = density · dx∧dy exactly when the density is in Q_{N-1}.
    let flat = Mesh::new(3, 2, 2, 0.0, Domain::Unit).unwrap();
    let local = reduce_on_mesh(&flat, &SmoothForm::Two(poly.clone()), 6).unwrap();
    assert!(l2_error_2form(&flat, |e| local[e].clone(), &poly, 7).unwrap() < 1e-13);
}

#[test]
fn cubic_order_error_is_small_and_decreasing() {
    let coarse = solve(&manufactured_spec(Method::Dual, 3, 4, 0.0, Domain::Unit)).unwrap();
    let fine = solve(&manufactured_spec(Method::Dual, 3, 8, 0.0, Domain::Unit)).unwrap();
    let m = ManufacturedSolution::sine();
    let ec = l2_error_2form(&coarse.mesh, |e| coarse.element_omega(e), &m.phi, 7).unwrap();
    let ef = l2_error_2form(&fine.mesh, |e| fine.element_omega(e), &m.phi, 7).unwrap();
    assert!(ec < 1e-2 && ef < ec / 4.0, "{ec} {ef}");
}

#[test]
fn h_sweep_reports_records_and_slopes() {
    let cfg = ExperimentConfig { orders: vec![2], mesh_levels: vec![2, 4, 8], c_list: vec![0.0], ..Default::default() };
    let out = run_h_convergence(&cfg).unwrap();
    assert_eq!(out.records.len(), 6);
    assert_eq!(out.slopes.len(), 2);
    for s in &out.slopes {
        assert!(s.omega.is_some_and(|v| v > 1.5) && s.q.is_some_and(|v| v > 1.5), "{s:?}");
    }
    let again = run_h_convergence(&cfg).unwrap();
    for (a, b) in out.records.iter().zip(&again.records) {
        assert_eq!((a.l2_omega, a.l2_q, a.dof), (b.l2_omega, b.l2_q, b.dof));
    }
    let mut buf = Vec::new();
    write_csv(&out.records, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
}

#[test]
fn p_sweep_on_undeformed_fine_mesh_decays_six_orders() {
    let cfg =
        ExperimentConfig { orders: (2..=8).collect(), mesh_levels: vec![2, 4], c_list: vec![0.0], ..Default::default() };
    let out = run_p_convergence(&cfg).unwrap();
    assert_eq!(out.projection.len(), 14);
    for method in [Method::Dual, Method::Single] {
        let errs = |m: usize| -> Vec<f64> {
            let mut v: Vec<_> = out.records.iter().filter(|r| r.method == method && r.mx == m).collect();
            v.sort_by_key(|r| r.order);
            v.iter().map(|r| r.l2_omega).collect()
        };
        let (e2, e4) = (errs(2), errs(4));
        assert!((e4[0] / e4[6]).log10() >= 6.0, "{method}: {e4:?}");
        for (a, b) in e2.iter().zip(&e4) {
            assert!(b <= a, "{method}: finer mesh error {b} above coarser {a}");
        }
    }
}

#[test]
fn methods_differ_and_difference_shrinks_with_order() {
    let d3 = method_difference(&manufactured_spec(Method::Dual, 3, 2, 0.0, Domain::Unit), 101).unwrap();
    let d5 = method_difference(&manufactured_spec(Method::Dual, 5, 2, 0.0, Domain::Unit), 101).unwrap();
    assert_eq!(d3.values.len(), 101 * 101);
    assert!(d3.linf > 1e-12 && d5.linf < d3.linf, "{} {}", d3.linf, d5.linf);
    assert!(method_difference(&manufactured_spec(Method::Dual, 3, 2, 0.0, Domain::Unit), 1).is_err());
}
