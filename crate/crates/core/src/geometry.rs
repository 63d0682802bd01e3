//! Element maps of the sine-deformed tensor mesh, Jacobians, metric data and
//! pullbacks of forms.
//!
//! A map is the composition `Φ = A_domain ∘ D_c ∘ A_element` where
//! `A_element` sends the reference square onto a rectangle of the canonical
//! square `[-1,1]²`, `D_c(s,t) = (s + c sin πs sin πt, t + c sin πs sin πt)`
//! deforms the canonical square onto itself, and `A_domain` scales the
//! canonical square onto the physical domain.

use std::f64::consts::PI;

use crate::basis::{field, SmoothForm};
use crate::error::{Error, Result};

/// Jacobians with `det ≤` this are treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const BIUNIT: Rect = Rect { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
    pub const UNIT: Rect = Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };

    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    fn contains(&self, other: &Rect, tol: f64) -> bool {
        other.x0 >= self.x0 - tol && other.x1 <= self.x1 + tol && other.y0 >= self.y0 - tol && other.y1 <= self.y1 + tol
    }
}

/// Physical domain of the global mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    /// `[0, 1]²`.
    #[default]
    Unit,
    /// `[-1, 1]²`.
    Biunit,
}

impl Domain {
    pub fn rect(self) -> Rect {
        match self {
            Domain::Unit => Rect::UNIT,
            Domain::Biunit => Rect::BIUNIT,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Unit => "unit",
            Domain::Biunit => "biunit",
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Domain::Unit),
            "biunit" => Ok(Domain::Biunit),
            _ => Err(Error::InvalidConfig(format!("unknown domain '{s}' (expected unit or biunit)"))),
        }
    }
}

pub type Mat2 = [[f64; 2]; 2];

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv2(m: &Mat2) -> Mat2 {
    let d = det2(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// Map from the reference square onto one physical element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvilinearMap {
    c: f64,
    element: Rect,
    domain: Rect,
}

/// Deformed map of `element_rect ⊂ [-1,1]²` with deformation amplitude `c`,
/// the physical domain being the canonical square itself.
pub fn crazy_map(c: f64, element_rect: Rect) -> Result<CurvilinearMap> {
    CurvilinearMap::new(c, element_rect, Rect::BIUNIT)
}

impl CurvilinearMap {
    /// `element` is a sub-rectangle of `[-1,1]²`, `domain` the physical image of `[-1,1]²`.
    pub fn new(c: f64, element: Rect, domain: Rect) -> Result<Self> {
        if !c.is_finite() || c.abs() >= 1.0 / PI {
            return Err(Error::InvalidConfig(format!("deformation |c| = {} must be below 1/π", c.abs())));
        }
        if !(element.width() > 0.0 && element.height() > 0.0) || !Rect::BIUNIT.contains(&element, 1e-12) {
            return Err(Error::InvalidConfig("element rectangle must lie inside [-1,1]²".into()));
        }
        if !(domain.width() > 0.0 && domain.height() > 0.0) {
            return Err(Error::InvalidConfig("domain rectangle must have positive extent".into()));
        }
        Ok(CurvilinearMap { c, element, domain })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn element(&self) -> Rect {
        self.element
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    fn canonical(&self, xi: f64, eta: f64) -> (f64, f64) {
        let e = &self.element;
        (e.x0 + 0.5 * (xi + 1.0) * e.width(), e.y0 + 0.5 * (eta + 1.0) * e.height())
    }

    /// `Φ(ξ, η)`.
    pub fn map(&self, xi: f64, eta: f64) -> (f64, f64) {
        let (s, t) = self.canonical(xi, eta);
        let b = self.c * (PI * s).sin() * (PI * t).sin();
        let d = &self.domain;
        (d.x0 + 0.5 * (s + b + 1.0) * d.width(), d.y0 + 0.5 * (t + b + 1.0) * d.height())
    }

    /// `J[r][k] = ∂x_r / ∂ξ_k`.
    pub fn jacobian(&self, xi: f64, eta: f64) -> Mat2 {
        let (s, t) = self.canonical(xi, eta);
        let (ss, cs) = (PI * s).sin_cos();
        let (st, ct) = (PI * t).sin_cos();
        let bs = self.c * PI * cs * st;
        let bt = self.c * PI * ss * ct;
        let (as_, at) = (0.5 * self.element.width(), 0.5 * self.element.height());
        let (ax, ay) = (0.5 * self.domain.width(), 0.5 * self.domain.height());
        [[ax * (1.0 + bs) * as_, ax * bt * at], [ay * bs * as_, ay * (1.0 + bt) * at]]
    }

    pub fn det(&self, xi: f64, eta: f64) -> f64 {
        det2(&self.jacobian(xi, eta))
    }

    /// Metric at one point, failing on singular or orientation-reversing Jacobians.
    pub fn metric_point(&self, xi: f64, eta: f64) -> Result<PointMetric> {
        let jac = self.jacobian(xi, eta);
        let det = det2(&jac);
        if det <= SINGULAR_DET {
            let (x, y) = self.map(xi, eta);
            return Err(Error::SingularMap { x, y, det });
        }
        let inv = inv2(&jac);
        let mut ginv = [[0.0; 2]; 2];
        for (i, row) in ginv.iter_mut().enumerate() {
            for (j, g) in row.iter_mut().enumerate() {
                *g = inv[i][0] * inv[j][0] + inv[i][1] * inv[j][1];
            }
        }
        Ok(PointMetric { jac, inv, det, ginv })
    }

    /// Reference coordinates of a physical point, by Newton iteration.
    pub fn inverse(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let d = &self.domain;
        let e = &self.element;
        let s = 2.0 * (x - d.x0) / d.width() - 1.0;
        let t = 2.0 * (y - d.y0) / d.height() - 1.0;
        let mut xi = (2.0 * (s - e.x0) / e.width() - 1.0).clamp(-1.5, 1.5);
        let mut eta = (2.0 * (t - e.y0) / e.height() - 1.0).clamp(-1.5, 1.5);
        let scale = d.width().abs().max(d.height().abs());
        for _ in 0..60 {
            let (px, py) = self.map(xi, eta);
            let (rx, ry) = (px - x, py - y);
            if rx.abs().max(ry.abs()) <= 1e-15 * scale {
                return Ok((xi, eta));
            }
            let inv = inv2(&self.jacobian(xi, eta));
            let dxi = inv[0][0] * rx + inv[0][1] * ry;
            let deta = inv[1][0] * rx + inv[1][1] * ry;
            xi -= dxi;
            eta -= deta;
            if dxi.abs().max(deta.abs()) < 1e-15 {
                return Ok((xi, eta));
            }
        }
        let (px, py) = self.map(xi, eta);
        if (px - x).abs().max((py - y).abs()) < 1e-12 * scale {
            Ok((xi, eta))
        } else {
            Err(Error::InverseMapFailure(x, y))
        }
    }
}

/// Geometric quantities at one reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetric {
    pub jac: Mat2,
    pub inv: Mat2,
    pub det: f64,
    /// Contravariant metric `J⁻¹ J⁻ᵀ`.
    pub ginv: Mat2,
}

/// Metric sampled at a list of reference points.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricData {
    pub points: Vec<(f64, f64)>,
    pub values: Vec<PointMetric>,
}

/// Jacobian, inverse, determinant and contravariant metric at `points`.
pub fn metric_at(map: &CurvilinearMap, points: &[(f64, f64)]) -> Result<MetricData> {
    let values = points.iter().map(|&(x, y)| map.metric_point(x, y)).collect::<Result<Vec<_>>>()?;
    Ok(MetricData { points: points.to_vec(), values })
}

/// Pulls a physical-space form back to reference coordinates through `map`.
pub fn pullback(form: &SmoothForm, map: &CurvilinearMap) -> SmoothForm {
    let m = *map;
    match form {
        SmoothForm::Zero(a) => {
            let a = a.clone();
            SmoothForm::Zero(field(move |xi, eta| {
                let (x, y) = m.map(xi, eta);
                a(x, y)
            }))
        }
        SmoothForm::One(ax, ay) => {
            let (ax1, ay1) = (ax.clone(), ay.clone());
            let (ax2, ay2) = (ax.clone(), ay.clone());
            SmoothForm::One(
                field(move |xi, eta| {
                    let (x, y) = m.map(xi, eta);
                    let j = m.jacobian(xi, eta);
                    j[0][0] * ax1(x, y) + j[1][0] * ay1(x, y)
                }),
                field(move |xi, eta| {
                    let (x, y) = m.map(xi, eta);
                    let j = m.jacobian(xi, eta);
                    j[0][1] * ax2(x, y) + j[1][1] * ay2(x, y)
                }),
            )
        }
        SmoothForm::Two(a) => {
            let a = a.clone();
            SmoothForm::Two(field(move |xi, eta| {
                let (x, y) = m.map(xi, eta);
                a(x, y) * m.det(xi, eta)
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undeformed_full_element_is_identity() {
        let m = crazy_map(0.0, Rect::BIUNIT).unwrap();
        for (x, y) in [(-0.4, 0.9), (0.3, 0.3), (1.0, -1.0)] {
            let (px, py) = m.map(x, y);
            assert!((px - x).abs() < 1e-15 && (py - y).abs() < 1e-15);
            let g = m.metric_point(x, y).unwrap().ginv;
            assert_eq!(g, [[1.0, 0.0], [0.0, 1.0]]);
        }
    }

    #[test]
    fn deformation_examples() {
        let m = crazy_map(0.1, Rect::BIUNIT).unwrap();
        assert_eq!(m.map(0.0, 0.0), (0.0, 0.0));
        let m = crazy_map(0.2, Rect::BIUNIT).unwrap();
        let (x, y) = m.map(0.5, 0.5);
        assert!((x - 0.7).abs() < 1e-15 && (y - 0.7).abs() < 1e-15);
    }

    #[test]
    fn quarter_element_has_quarter_det() {
        let m = crazy_map(0.0, Rect::new(0.0, 1.0, 0.0, 1.0)).unwrap();
        for (x, y) in [(-1.0, -1.0), (0.2, 0.7)] {
            assert!((m.det(x, y) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_large_deformation() {
        assert!(crazy_map(0.32, Rect::BIUNIT).is_err());
        assert!(crazy_map(-0.4, Rect::BIUNIT).is_err());
        assert!(crazy_map(0.0, Rect::new(0.0, 1.5, 0.0, 1.0)).is_err());
    }

    #[test]
    fn det_at_center_matches_finite_differences() {
        let m = crazy_map(0.1, Rect::BIUNIT).unwrap();
        let h = 1e-5;
        let (xp, yp) = m.map(h, 0.0);
        let (xm, ym) = m.map(-h, 0.0);
        let (xq, yq) = m.map(0.0, h);
        let (xr, yr) = m.map(0.0, -h);
        let fd = ((xp - xm) * (yq - yr) - (xq - xr) * (yp - ym)) / (4.0 * h * h);
        assert!((m.det(0.0, 0.0) - fd).abs() < 1e-7);
        assert!((m.det(0.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_round_trip() {
        let m = CurvilinearMap::new(0.2, Rect::new(-0.5, 0.0, 0.0, 0.5), Rect::UNIT).unwrap();
        for (a, b) in [(-1.0, -1.0), (0.3, -0.8), (0.99, 0.5)] {
            let (x, y) = m.map(a, b);
            let (p, q) = m.inverse(x, y).unwrap();
            assert!((p - a).abs() < 1e-13 && (q - b).abs() < 1e-13);
        }
    }

    #[test]
    fn domain_parsing() {
        assert_eq!("unit".parse::<Domain>().unwrap(), Domain::Unit);
        assert_eq!("biunit".parse::<Domain>().unwrap(), Domain::Biunit);
        assert!("square".parse::<Domain>().is_err());
    }
}
