use rayon::prelude::*;

use super::errors::{l2_error, projection_error_1form, projection_error_2form};
use super::manufactured::{manufactured_spec, ManufacturedSolution};
use super::records::ErrorRecord;
use crate::basis::SmoothForm;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::solvers::{solve, Method, ProblemSpec, Solution};

/// Errors below this are treated as round-off and left out of slope fits.
pub const ROUND_OFF_FLOOR: f64 = 1e-11;

/// Parameters of a convergence sweep over the manufactured problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub orders: Vec<usize>,
    /// Elements per side.
    pub mesh_levels: Vec<usize>,
    pub c_list: Vec<f64>,
    pub domain: Domain,
    /// Solver quadrature; `None` means `N + 3`.
    pub quad_order: Option<usize>,
    /// Error quadrature; `None` means `N + 4`.
    pub error_quad_order: Option<usize>,
    /// Seed for the randomised property checks.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            methods: vec![Method::Dual, Method::Single],
            orders: vec![1, 2, 3],
            mesh_levels: vec![2, 4, 8, 16],
            c_list: vec![0.0, 0.1, 0.2],
            domain: Domain::Unit,
            quad_order: None,
            error_quad_order: None,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn spec(&self, method: Method, order: usize, m: usize, c: f64) -> ProblemSpec {
        ProblemSpec { quad_order: self.quad_order, ..manufactured_spec(method, order, m, c, self.domain) }
    }

    pub fn error_quad(&self, order: usize) -> usize {
        self.error_quad_order.unwrap_or(order + 4)
    }

    fn cases(&self) -> Vec<(Method, usize, usize, f64)> {
        let mut out = Vec::new();
        for &c in &self.c_list {
            for &n in &self.orders {
                for &method in &self.methods {
                    for &m in &self.mesh_levels {
                        out.push((method, n, m, c));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() || self.orders.is_empty() || self.mesh_levels.is_empty() || self.c_list.is_empty() {
            return Err(Error::InvalidConfig("methods, orders, mesh levels and c list must be nonempty".into()));
        }
        for (method, n, m, c) in self.cases() {
            self.spec(method, n, m, c).validate()?;
            if self.error_quad(n) < n + 1 {
                return Err(Error::InvalidConfig("error quadrature must be at least N + 1".into()));
            }
        }
        Ok(())
    }
}

/// L² errors of a solution against the manufactured solution.
pub fn solution_errors(sol: &Solution, error_quad: usize) -> Result<(f64, f64)> {
    let m = ManufacturedSolution::sine();
    let w = l2_error(sol, &SmoothForm::Two(m.phi), error_quad)?;
    let q = l2_error(sol, &SmoothForm::One(m.flux.0, m.flux.1), error_quad)?;
    Ok((w, q))
}

/// Solves `spec`, which must carry the manufactured data, and measures it.
pub fn measure(spec: &ProblemSpec, error_quad: usize) -> Result<ErrorRecord> {
    let (method, order, mx, my, c) = (spec.method, spec.order, spec.mx, spec.my, spec.c);
    let sol = solve(spec).map_err(|e| match e {
        Error::SolverFailure(s) => Error::SolverFailure(format!("{method} N={order} {mx}x{my} c={c}: {s}")),
        other => other,
    })?;
    let (l2_omega, l2_q) = solution_errors(&sol, error_quad)?;
    Ok(ErrorRecord {
        method,
        order,
        mx,
        my,
        c,
        dof: sol.diagnostics.dof,
        l2_omega,
        l2_q,
        linf_conservation: sol.conservation(),
        runtime_s: sol.diagnostics.runtime_s,
    })
}

/// Solves one manufactured case on an `m × m` mesh and measures it.
pub fn run_case(cfg: &ExperimentConfig, method: Method, order: usize, m: usize, c: f64) -> Result<ErrorRecord> {
    measure(&cfg.spec(method, order, m, c), cfg.error_quad(order))
}

/// Runs every (c, N, method, level) combination; output order is deterministic.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ErrorRecord>> {
    cfg.validate()?;
    cfg.cases().into_par_iter().map(|(method, n, m, c)| run_case(cfg, method, n, m, c)).collect()
}

/// Least-squares slope of `log e` against `log h` over the three smallest `h`,
/// skipping errors below [`ROUND_OFF_FLOOR`]. `None` with fewer than two usable points.
pub fn fit_slope(h: &[f64], err: &[f64]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = h.iter().copied().zip(err.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pts: Vec<(f64, f64)> =
        pts.into_iter().take(3).filter(|p| p.1 >= ROUND_OFF_FLOOR).map(|(h, e)| (h.ln(), e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Fitted h-convergence rates of one (method, N, c) series.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub method: Method,
    pub order: usize,
    pub c: f64,
    pub omega: Option<f64>,
    pub q: Option<f64>,
}

/// Slopes of every (method, N, c) series in `records`.
pub fn fit_slopes(records: &[ErrorRecord]) -> Vec<SlopeFit> {
    let mut keys: Vec<(Method, usize, f64)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.method, r.order, r.c)) {
            keys.push((r.method, r.order, r.c));
        }
    }
    keys.into_iter()
        .map(|(method, order, c)| {
            let s: Vec<&ErrorRecord> =
                records.iter().filter(|r| r.method == method && r.order == order && r.c == c).collect();
            let h: Vec<f64> = s.iter().map(|r| r.h()).collect();
            let w: Vec<f64> = s.iter().map(|r| r.l2_omega).collect();
            let q: Vec<f64> = s.iter().map(|r| r.l2_q).collect();
            SlopeFit { method, order, c, omega: fit_slope(&h, &w), q: fit_slope(&h, &q) }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct HConvergence {
    pub records: Vec<ErrorRecord>,
    pub slopes: Vec<SlopeFit>,
}

/// h-refinement study; needs at least three mesh levels.
pub fn run_h_convergence(cfg: &ExperimentConfig) -> Result<HConvergence> {
    if cfg.mesh_levels.len() < 3 {
        return Err(Error::InvalidConfig("h-convergence needs at least 3 mesh levels".into()));
    }
    let records = run_sweep(cfg)?;
    let slopes = fit_slopes(&records);
    Ok(HConvergence { records, slopes })
}

/// Error of the mimetic projection of the exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionRecord {
    pub order: usize,
    pub mx: usize,
    pub c: f64,
    pub l2_omega: f64,
    pub l2_q: f64,
}

#[derive(Debug, Clone)]
pub struct PConvergence {
    pub records: Vec<ErrorRecord>,
    /// Reference curve: the projection of the exact solution onto the same spaces.
    pub projection: Vec<ProjectionRecord>,
}

/// Projection errors for every (c, N, level) of `cfg`.
pub fn projection_errors(cfg: &ExperimentConfig) -> Result<Vec<ProjectionRecord>> {
    let mut cases = Vec::new();
    for &c in &cfg.c_list {
        for &n in &cfg.orders {
            for &m in &cfg.mesh_levels {
                cases.push((n, m, c));
            }
        }
    }
    let exact = ManufacturedSolution::sine();
    cases
        .into_par_iter()
        .map(|(n, m, c)| {
            let mesh = cfg.spec(Method::Dual, n, m, c).mesh()?;
            let reduce_quad = cfg.spec(Method::Dual, n, m, c).quad_order();
            let eq = cfg.error_quad(n);
            Ok(ProjectionRecord {
                order: n,
                mx: m,
                c,
                l2_omega: projection_error_2form(&mesh, &exact.phi, reduce_quad, eq)?,
                l2_q: projection_error_1form(&mesh, &exact.flux, reduce_quad, eq)?,
            })
        })
        .collect()
}

/// p-refinement study with the projection reference curve.
pub fn run_p_convergence(cfg: &ExperimentConfig) -> Result<PConvergence> {
    let records = run_sweep(cfg)?;
    let projection = projection_errors(cfg)?;
    Ok(PConvergence { records, projection })
}

/// Pointwise difference of the two methods' `⋆ω_h` on a uniform grid.
#[derive(Debug, Clone)]
pub struct MethodDifference {
    /// Samples per direction.
    pub samples: usize,
    /// `|⋆ω_dual − ⋆ω_single|`, row-major with `x` fastest.
    pub values: Vec<f64>,
    pub linf: f64,
}

/// Solves `spec` with both methods and samples `|⋆ω_dual − ⋆ω_single|` on a
/// `samples × samples` grid covering the domain.
pub fn method_difference(spec: &ProblemSpec, samples: usize) -> Result<MethodDifference> {
    if samples < 2 {
        return Err(Error::InvalidConfig("need at least 2 samples per direction".into()));
    }
    let dual = solve(&spec.with_method(Method::Dual))?;
    let single = solve(&spec.with_method(Method::Single))?;
    let r = spec.domain.rect();
    let pts: Vec<(f64, f64)> = (0..samples)
        .flat_map(|j| {
            (0..samples).map(move |i| {
                let s = |k: usize, a: f64, b: f64| a + (b - a) * k as f64 / (samples - 1) as f64;
                (s(i, r.x0, r.x1), s(j, r.y0, r.y1))
            })
        })
        .collect();
    let values: Vec<f64> = pts
        .par_iter()
        .map(|&(x, y)| Ok((dual.omega_at(x, y)? - single.omega_at(x, y)?).abs()))
        .collect::<Result<_>>()?;
    let linf = values.iter().copied().fold(0.0, f64::max);
    Ok(MethodDifference { samples, values, linf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let h = [0.5, 0.25, 0.125, 0.0625];
        let e: Vec<f64> = h.iter().map(|h: &f64| 3.0 * h.powi(3)).collect();
        assert!((fit_slope(&h, &e).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn slope_uses_finest_three_levels() {
        // The coarsest level is off the power law and must be ignored.
        let h = [0.0625, 0.5, 0.125, 0.25];
        let e = [0.0625f64.powi(2), 10.0, 0.125f64.powi(2), 0.25f64.powi(2)];
        assert!((fit_slope(&h, &e).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn slope_skips_round_off() {
        let h = [0.25, 0.125, 0.0625];
        let e = [1e-6, 1e-8, 1e-14];
        assert!((fit_slope(&h, &e).unwrap() - (100f64.ln() / 2f64.ln())).abs() < 1e-12);
        assert_eq!(fit_slope(&h, &[1e-6, 1e-12, 1e-14]), None);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = ExperimentConfig { orders: vec![], ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { c_list: vec![0.4], ..Default::default() };
        assert!(bad.validate().is_err());
        let short = ExperimentConfig { mesh_levels: vec![2, 4], ..Default::default() };
        assert!(run_h_convergence(&short).is_err());
    }
}
