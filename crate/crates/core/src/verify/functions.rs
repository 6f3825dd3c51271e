use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{ChaosError, Result};

/// A `C²` test function with its first two derivatives.
#[derive(Debug, Clone, Copy)]
pub struct FunctionSpec {
    tag: &'static str,
    f: fn(f64) -> f64,
    d1: fn(f64) -> f64,
    d2: fn(f64) -> f64,
}

const FD_POINTS: usize = 10;
const FD_TOL: f64 = 1e-6;

impl FunctionSpec {
    /// Build and validate against central finite differences.
    pub fn new(tag: &'static str, f: fn(f64) -> f64, d1: fn(f64) -> f64, d2: fn(f64) -> f64) -> Result<Self> {
        let spec = Self { tag, f, d1, d2 };
        let err = spec.finite_difference_error(0x5eed)?;
        if err > FD_TOL {
            return Err(ChaosError::DegenerateInstance(format!("derivatives of `{tag}` off by {err:.3e}")));
        }
        Ok(spec)
    }

    pub fn square() -> Self {
        Self { tag: "square", f: |x| x * x, d1: |x| 2.0 * x, d2: |_| 2.0 }
    }

    pub fn cube() -> Self {
        Self { tag: "cube", f: |x| x * x * x, d1: |x| 3.0 * x * x, d2: |x| 6.0 * x }
    }

    pub fn cos() -> Self {
        Self { tag: "cos", f: f64::cos, d1: |x| -x.sin(), d2: |x| -x.cos() }
    }

    pub fn linear() -> Self {
        Self { tag: "linear", f: |x| 2.0 * x - 1.0, d1: |_| 2.0, d2: |_| 0.0 }
    }

    /// The functions every Itô-formula check runs over.
    pub fn catalogue() -> Vec<Self> {
        vec![Self::square(), Self::cube(), Self::cos()]
    }

    pub fn tag(&self) -> &'static str {
        self.tag
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        (self.d1)(x)
    }

    pub fn d2(&self, x: f64) -> f64 {
        (self.d2)(x)
    }

    /// Largest relative error of `f′`, `f″` against central differences at
    /// ten seeded points of `[−2, 2]`.
    pub fn finite_difference_error(&self, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = 1e-5;
        let h2 = 1e-4;
        let mut worst: f64 = 0.0;
        for _ in 0..FD_POINTS {
            let x: f64 = rng.random_range(-2.0..2.0);
            let fd1 = (self.f(x + h1) - self.f(x - h1)) / (2.0 * h1);
            let fd2 = (self.f(x + h2) - 2.0 * self.f(x) + self.f(x - h2)) / (h2 * h2);
            let e1 = (fd1 - self.d1(x)).abs() / self.d1(x).abs().max(1.0);
            let e2 = (fd2 - self.d2(x)).abs() / self.d2(x).abs().max(1.0);
            if !(e1.is_finite() && e2.is_finite()) {
                return Err(ChaosError::DegenerateInstance(format!("`{}` is not finite near {x}", self.tag)));
            }
            worst = worst.max(e1).max(e2);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_derivatives_match_finite_differences() {
        for f in FunctionSpec::catalogue().into_iter().chain([FunctionSpec::linear()]) {
            assert!(f.finite_difference_error(1).unwrap() <= FD_TOL, "{}", f.tag());
        }
    }

    #[test]
    fn wrong_derivative_is_rejected() {
        assert!(FunctionSpec::new("bad", |x| x * x, |x| x, |_| 2.0).is_err());
        assert!(FunctionSpec::new("sin", f64::sin, f64::cos, |x| -x.sin()).is_ok());
    }
}
