//! Gauss–Legendre rules and small polynomials on the unit interval.

use std::sync::OnceLock;

/// Number of Gauss–Legendre nodes used for non-polynomial time integrals.
pub const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[0, 1]` (weights sum to 1).
pub fn gauss_legendre_unit() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER).into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect())
}

/// Nodes/weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// Chebyshev points of the first kind mapped into `(0, 1)`.
pub fn chebyshev_unit(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| 0.5 * (1.0 - ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos()))
        .collect()
}

/// Polynomial in monomial form `Σ c_i x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coefs: Vec<f64>,
}

impl Poly {
    pub fn new(coefs: Vec<f64>) -> Self {
        Self { coefs }
    }

    /// Interpolating polynomial through `(xs[i], ys[i])` (Newton form, then expanded).
    pub fn interpolate(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            }
        }
        let mut coefs = vec![dd[n - 1]];
        for k in (0..n - 1).rev() {
            // coefs ← coefs·(x − xs[k]) + dd[k]
            let mut next = vec![0.0; coefs.len() + 1];
            for (i, &c) in coefs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * xs[k];
            }
            next[0] += dd[k];
            coefs = next;
        }
        Self { coefs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut coefs = vec![0.0];
        coefs.extend(self.coefs.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
        Self { coefs }
    }

    pub fn coefs(&self) -> &[f64] {
        &self.coefs
    }
}
