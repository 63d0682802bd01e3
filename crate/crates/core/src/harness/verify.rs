use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::convergence::{fit_slope, method_difference, projection_errors, run_sweep, ExperimentConfig};
use super::manufactured::manufactured_spec;
use super::random::random_form;
use super::records::ErrorRecord;
use crate::assembly::{assemble_mass, hodge_02, hodge_11_dual_to_primal, DualBasis};
use crate::basis::{gauss_legendre, gll_rule, reduce, reconstruct, BasisFamily1D};
use crate::error::{Error, Result};
use crate::geometry::{pullback, CurvilinearMap, Domain, Rect};
use crate::mesh::Mesh;
use crate::solvers::Method;
use crate::topology::{build_dual_grid, build_primal_complex, Chain, Cochain, IncidenceMatrix};

/// Identifiers of the acceptance criteria, in order.
pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checks: usize,
    /// Description of every failed comparison.
    pub failures: Vec<String>,
    /// Headline measurements.
    pub notes: Vec<String>,
    pub elapsed_s: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} ({}): {} [{} checks, {} failed, {:.2} s]",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len(),
            self.elapsed_s
        )
    }
}

struct Checker {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    fn finish(mut self, id: u8, name: &'static str, start: Instant, budget_s: Option<f64>) -> CriterionReport {
        let elapsed_s = start.elapsed().as_secs_f64();
        if let Some(b) = budget_s {
            self.check(elapsed_s < b, || format!("runtime {elapsed_s:.2} s exceeds the {b} s budget"));
        }
        CriterionReport {
            id,
            name,
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
            notes: self.notes,
            elapsed_s,
        }
    }
}

fn random_integers(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-9i32..=9) as f64).collect()
}

/// `E(2,1) E(1,0) = 0` and `⟨δc, a⟩ = ⟨c, ∂a⟩` on every complex with 1 to 8 cells per direction.
pub fn criterion_topology(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for nx in 1..=8 {
        for ny in 1..=8 {
            let k = build_primal_complex(&gll_rule(nx)?.nodes, &gll_rule(ny)?.nodes)?;
            let ee = k.incidence_matrix(2)?.matmul(&k.incidence_matrix(1)?);
            ck.check(ee.iter().flatten().all(|&v| v == 0), || format!("E21 E10 != 0 for {nx}x{ny}"));
            for _ in 0..100 {
                for deg in 1..=2 {
                    let c = Cochain::new(deg - 1, random_integers(&mut rng, k.num_cells(deg - 1)));
                    let a = Chain::new(deg, random_integers(&mut rng, k.num_cells(deg)));
                    let lhs = k.coboundary(&c)?.pair(&a)?;
                    let rhs = c.pair(&k.boundary(&a)?)?;
                    ck.check(lhs == rhs, || format!("{nx}x{ny} degree {deg}: <dc,a> = {lhs} but <c,da> = {rhs}"));
                }
            }
        }
    }
    Ok(ck.finish(1, "topological exactness", start, Some(1.0)))
}

/// Kronecker properties of the nodal and edge polynomials for `N = 1..12`.
pub fn criterion_basis(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    for n in 1..=12 {
        let f = BasisFamily1D::gll(n)?;
        let x = f.nodes().to_vec();
        let g = gauss_legendre(n + 2)?;
        let mut worst_h = 0.0f64;
        let mut worst_e = 0.0f64;
        for p in 0..=n {
            let h = f.lagrange_all(x[p]);
            for (i, v) in h.iter().enumerate() {
                worst_h = worst_h.max((v - if i == p { 1.0 } else { 0.0 }).abs());
            }
        }
        for p in 1..=n {
            let (pts, w) = g.mapped(x[p - 1], x[p]);
            let mut ints = vec![0.0; n];
            for (t, wt) in pts.iter().zip(&w) {
                for (i, e) in f.edge_all(*t).iter().enumerate() {
                    ints[i] += wt * e;
                }
            }
            for (i, v) in ints.iter().enumerate() {
                worst_e = worst_e.max((v - if i + 1 == p { 1.0 } else { 0.0 }).abs());
            }
        }
        ck.check(worst_h < 1e-13, || format!("N={n}: nodal duality off by {worst_h:e}"));
        ck.check(worst_e < 1e-12, || format!("N={n}: edge duality off by {worst_e:e}"));
    }
    Ok(ck.finish(2, "basis dualities", start, Some(1.0)))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// `R d = δ R`, `d I = I δ` and `π d = d π` on random smooth forms pulled back
/// through a deformed element.
pub fn criterion_commuting(seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quad = 24;
    let map = CurvilinearMap::new(0.15, Rect::new(0.0, 0.5, 0.25, 0.75), Rect::UNIT)?;
    let mut worst = [0.0f64; 3];
    for deg in 0..=1 {
        for trial in 0..50 {
            let n = rng.gen_range(2..=8);
            let family = BasisFamily1D::gll(n)?;
            let k = build_primal_complex(family.nodes(), family.nodes())?;
            let (form, dform) = random_form(&mut rng, deg);
            let (form, dform) = (pullback(&form, &map), pullback(&dform.expect("degree below 2"), &map));
            let r = reduce(&form, &k, quad)?;
            let rd = reduce(&dform, &k, quad)?;
            let dr = k.coboundary(&r)?;
            let e0 = max_diff(&rd.coefficients, &dr.coefficients);
            worst[0] = worst[0].max(e0);
            ck.check(e0 < 1e-10, || format!("degree {deg} trial {trial} N={n}: |R d - d R| = {e0:e}"));

            let pi = reconstruct(&r, &family)?;
            let pi_d = reconstruct(&rd, &family)?;
            let i_dr = reconstruct(&dr, &family)?;
            let mut e1 = 0.0f64;
            let mut e2 = 0.0f64;
            for _ in 0..20 {
                let (xi, eta) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let d_pi = pi.d_eval(xi, eta)?;
                e1 = e1.max(max_diff(&d_pi, &i_dr.eval(xi, eta)));
                e2 = e2.max(max_diff(&d_pi, &pi_d.eval(xi, eta)));
            }
            worst[1] = worst[1].max(e1);
            worst[2] = worst[2].max(e2);
            ck.check(e1 < 1e-10, || format!("degree {deg} trial {trial} N={n}: |d I - I d| = {e1:e}"));
            ck.check(e2 < 1e-10, || format!("degree {deg} trial {trial} N={n}: |pi d - d pi| = {e2:e}"));
        }
    }
    ck.note(format!("max |R d - d R| = {:.2e}, |d I - I d| = {:.2e}, |pi d - d pi| = {:.2e}", worst[0], worst[1], worst[2]));
    Ok(ck.finish(3, "commuting diagrams", start, Some(10.0)))
}

/// `‖δq − f_h‖_∞ < 1e−10` for both methods over a grid of problems.
pub fn criterion_conservation(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let cfg = ExperimentConfig { mesh_levels: vec![2, 4, 8], ..ExperimentConfig::default() };
    let records = run_sweep(&cfg)?;
    let worst = records.iter().map(|r| r.linf_conservation).fold(0.0, f64::max);
    for r in &records {
        ck.check(r.linf_conservation < 1e-10, || {
            format!("{} N={} {}x{} c={}: residual {:e}", r.method, r.order, r.mx, r.my, r.c, r.linf_conservation)
        });
    }
    ck.note(format!("largest conservation residual {worst:.2e} over {} solves", records.len()));
    Ok(ck.finish(4, "conservation", start, Some(120.0)))
}

fn series(records: &[ErrorRecord], method: Method, n: usize, c: f64) -> Vec<&ErrorRecord> {
    let mut s: Vec<&ErrorRecord> = records.iter().filter(|r| r.method == method && r.order == n && r.c == c).collect();
    s.sort_by_key(|r| r.mx);
    s
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Slopes within `N + 1 ± 0.3`, and agreement of the two methods.
pub fn criterion_h_convergence(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let cfg = ExperimentConfig::default();
    let records = run_sweep(&cfg)?;
    for &c in &cfg.c_list {
        for &n in &cfg.orders {
            let target = (n + 1) as f64;
            let mut slopes = Vec::new();
            for method in [Method::Dual, Method::Single] {
                let s = series(&records, method, n, c);
                let h: Vec<f64> = s.iter().map(|r| r.h()).collect();
                let w = fit_slope(&h, &s.iter().map(|r| r.l2_omega).collect::<Vec<_>>());
                let q = fit_slope(&h, &s.iter().map(|r| r.l2_q).collect::<Vec<_>>());
                for (what, v) in [("omega", w), ("q", q)] {
                    ck.check(v.is_some_and(|v| (v - target).abs() <= 0.3), || {
                        format!("{method} N={n} c={c}: {what} slope {v:.3?}, expected {target} +- 0.3")
                    });
                }
                ck.note(format!("{method} N={n} c={c}: slope omega {:.3}, q {:.3}", w.unwrap_or(f64::NAN), q.unwrap_or(f64::NAN)));
                slopes.push((w, q));
            }
            for (what, a, b) in [("omega", slopes[0].0, slopes[1].0), ("q", slopes[0].1, slopes[1].1)] {
                ck.check(matches!((a, b), (Some(a), Some(b)) if (a - b).abs() <= 0.1), || {
                    format!("N={n} c={c}: {what} slopes differ, dual {a:.3?} single {b:.3?}")
                });
            }
            let (d, s) = (series(&records, Method::Dual, n, c), series(&records, Method::Single, n, c));
            for (rd, rs) in d.iter().zip(&s) {
                for (what, a, b) in [("omega", rd.l2_omega, rs.l2_omega), ("q", rd.l2_q, rs.l2_q)] {
                    let g = rel_gap(a, b);
                    ck.check(g <= 0.05, || {
                        format!("N={n} c={c} {}x{}: {what} errors differ by {:.1}% ({a:.3e} vs {b:.3e})", rd.mx, rd.my, 100.0 * g)
                    });
                }
            }
        }
    }
    Ok(ck.finish(5, "h-convergence", start, Some(600.0)))
}

/// Spectral decay on 2×2 and 4×4 meshes and comparison with the projection error.
pub fn criterion_p_convergence(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let cfg = ExperimentConfig { orders: (2..=8).collect(), mesh_levels: vec![2, 4], ..ExperimentConfig::default() };
    let records = run_sweep(&cfg)?;
    let proj = projection_errors(&cfg)?;
    // Levels below this count as the round-off plateau.
    let plateau = super::ROUND_OFF_FLOOR;
    for &c in &cfg.c_list {
        for &m in &cfg.mesh_levels {
            for method in [Method::Dual, Method::Single] {
                let mut s: Vec<&ErrorRecord> =
                    records.iter().filter(|r| r.method == method && r.mx == m && r.c == c).collect();
                s.sort_by_key(|r| r.order);
                for (what, errs) in [
                    ("omega", s.iter().map(|r| r.l2_omega).collect::<Vec<_>>()),
                    ("q", s.iter().map(|r| r.l2_q).collect::<Vec<_>>()),
                ] {
                    for (k, w) in errs.windows(2).enumerate() {
                        if w[0] > plateau {
                            ck.check(w[1] < w[0], || {
                                format!("{method} {m}x{m} c={c}: {what} error grows from N={} to N={}", k + 2, k + 3)
                            });
                        }
                    }
                    let best = errs.iter().copied().fold(f64::INFINITY, f64::min).max(f64::MIN_POSITIVE);
                    let orders = (errs[0] / best).log10();
                    ck.check(orders >= 6.0, || {
                        format!("{method} {m}x{m} c={c}: {what} error decays by {orders:.2} orders, need 6")
                    });
                    ck.note(format!("{method} {m}x{m} c={c}: {what} decays {orders:.2} orders over N=2..8"));
                }
                for r in &s {
                    let p = proj.iter().find(|p| p.order == r.order && p.mx == m && p.c == c).expect("same grid");
                    ck.check(r.l2_omega >= p.l2_omega, || {
                        format!("{method} N={} {m}x{m} c={c}: omega error {:.4e} below projection {:.4e}", r.order, r.l2_omega, p.l2_omega)
                    });
                    ck.check(r.l2_q >= p.l2_q, || {
                        format!("{method} N={} {m}x{m} c={c}: q error {:.4e} below projection {:.4e}", r.order, r.l2_q, p.l2_q)
                    });
                }
            }
        }
    }
    Ok(ck.finish(6, "p-convergence", start, Some(300.0)))
}

/// The two methods give different ω, with the gap shrinking from N = 3 to N = 5.
pub fn criterion_method_difference(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    for c in [0.0, 0.1, 0.2] {
        let d3 = method_difference(&manufactured_spec(Method::Dual, 3, 2, c, Domain::Unit), 101)?.linf;
        let d5 = method_difference(&manufactured_spec(Method::Dual, 5, 2, c, Domain::Unit), 101)?.linf;
        ck.check(d3 > 1e-12, || format!("c={c}: N=3 difference {d3:e} is not above 1e-12"));
        ck.check(d5 < d3, || format!("c={c}: difference does not shrink, N=3 {d3:e}, N=5 {d5:e}"));
        ck.note(format!("c={c}: max |omega_dual - omega_single| = {d3:.3e} (N=3), {d5:.3e} (N=5)"));
    }
    Ok(ck.finish(7, "method non-identity", start, None))
}

fn dual_incidences(mesh: &Mesh) -> Result<Vec<IncidenceMatrix>> {
    let dual = build_dual_grid(mesh.local_complex(), DualBasis::gauss(mesh.order())?.nodes())?;
    Ok(vec![dual.incidence_matrix(1)?, dual.incidence_matrix(2)?, dual.ghost_incidence()?])
}

/// Topological operators do not depend on the map; metric operators do.
pub fn criterion_metric_separation(_seed: u64) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut ck = Checker::new();
    let (n, m) = (3, 2);
    let meshes: Vec<Mesh> = [0.0, 0.1, 0.2].iter().map(|&c| Mesh::new(n, m, m, c, Domain::Unit)).collect::<Result<_>>()?;
    let incidences = |mesh: &Mesh| -> Result<Vec<IncidenceMatrix>> {
        let g = mesh.global_complex();
        let l = mesh.local_complex();
        let mut v = vec![g.incidence_matrix(1)?, g.incidence_matrix(2)?, l.incidence_matrix(1)?, l.incidence_matrix(2)?];
        v.extend(dual_incidences(mesh)?);
        Ok(v)
    };
    let reference = incidences(&meshes[0])?;
    for mesh in &meshes[1..] {
        let other = incidences(mesh)?;
        for (i, (a, b)) in reference.iter().zip(&other).enumerate() {
            ck.check(a == b, || format!("incidence matrix #{i} changes at c={}", mesh.c()));
        }
    }
    let quad = n + 3;
    let (m0, m2) = (&meshes[0], &meshes[2]);
    for k in 0..=2 {
        let a = assemble_mass(m0, k, quad)?;
        let b = assemble_mass(m2, k, quad)?;
        let gap = (a.frobenius_norm() - b.frobenius_norm()).abs();
        ck.check(gap > 1e-3, || format!("mass matrix M{k} norm changes by only {gap:e}"));
        ck.note(format!("|‖M{k}(c=0)‖ - ‖M{k}(c=0.2)‖| = {gap:.3e}"));
    }
    let basis = DualBasis::gauss(n)?;
    let fro = |m: &nalgebra::DMatrix<f64>| m.norm();
    let h02 = |mesh: &Mesh| hodge_02(mesh.family(), basis.nodes(), mesh.element_map(0)).map(|h| fro(&h.matrix));
    let h11 = |mesh: &Mesh| hodge_11_dual_to_primal(&basis, mesh.family(), mesh.element_map(0), quad).map(|h| fro(&h.matrix));
    for (name, a, b) in [("H02", h02(m0)?, h02(m2)?), ("H11", h11(m0)?, h11(m2)?)] {
        let gap = (a - b).abs();
        ck.check(gap > 1e-3, || format!("Hodge matrix {name} norm changes by only {gap:e}"));
        ck.note(format!("|‖{name}(c=0)‖ - ‖{name}(c=0.2)‖| = {gap:.3e}"));
    }
    Ok(ck.finish(8, "metric/topology separation", start, None))
}

/// Runs one acceptance criterion by number.
pub fn verify_criterion(id: u8, seed: u64) -> Result<CriterionReport> {
    match id {
        1 => criterion_topology(seed),
        2 => criterion_basis(seed),
        3 => criterion_commuting(seed),
        4 => criterion_conservation(seed),
        5 => criterion_h_convergence(seed),
        6 => criterion_p_convergence(seed),
        7 => criterion_method_difference(seed),
        8 => criterion_metric_separation(seed),
        _ => Err(Error::InvalidConfig(format!("no acceptance criterion {id}"))),
    }
}

/// Runs all acceptance criteria.
pub fn verify_all(seed: u64) -> Result<Vec<CriterionReport>> {
    CRITERIA.iter().map(|&id| verify_criterion(id, seed)).collect()
}

