use std::sync::Arc;

use rand::Rng;

use crate::basis::{field, ScalarField, SmoothForm};

/// `Σ a_k sin(p_k x + q_k y + r_k)` with analytic partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigField {
    terms: Vec<[f64; 4]>,
}

impl TrigField {
    /// Three terms with amplitudes in `[-1, 1]`, wave numbers in `[-3, 3]`.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let terms = (0..3)
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ]
            })
            .collect();
        TrigField { terms }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|[a, p, q, r]| a * (p * x + q * y + r).sin()).sum()
    }

    pub fn dx(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|[a, p, q, r]| a * p * (p * x + q * y + r).cos()).sum()
    }

    pub fn dy(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|[a, p, q, r]| a * q * (p * x + q * y + r).cos()).sum()
    }

    fn as_field(self: &Arc<Self>, which: fn(&TrigField, f64, f64) -> f64) -> ScalarField {
        let f = self.clone();
        field(move |x, y| which(&f, x, y))
    }
}

/// A random smooth form of degree 0, 1 or 2 together with its exterior derivative
/// (`None` for a 2-form).
pub fn random_form<R: Rng>(rng: &mut R, degree: usize) -> (SmoothForm, Option<SmoothForm>) {
    let a = Arc::new(TrigField::random(rng));
    match degree {
        0 => (
            SmoothForm::Zero(a.as_field(TrigField::value)),
            Some(SmoothForm::One(a.as_field(TrigField::dx), a.as_field(TrigField::dy))),
        ),
        1 => {
            let b = Arc::new(TrigField::random(rng));
            let (a2, b2) = (a.clone(), b.clone());
            let curl = field(move |x, y| b2.dx(x, y) - a2.dy(x, y));
            (SmoothForm::One(a.as_field(TrigField::value), b.as_field(TrigField::value)), Some(SmoothForm::Two(curl)))
        }
        _ => (SmoothForm::Two(a.as_field(TrigField::value)), None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = TrigField::random(&mut rng);
        let (x, y, h) = (0.3, -0.4, 1e-6);
        assert!(((f.value(x + h, y) - f.value(x - h, y)) / (2.0 * h) - f.dx(x, y)).abs() < 1e-8);
        assert!(((f.value(x, y + h) - f.value(x, y - h)) / (2.0 * h) - f.dy(x, y)).abs() < 1e-8);
    }
}
