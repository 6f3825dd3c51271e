use rayon::prelude::*;

use super::{sample_path, PoissonPath};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Mean and `std/√n` of the given samples (in order).
    pub fn from_samples(samples: &[f64], seed: u64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        Self { mean, stderr: (var / n as f64).sqrt(), n_samples: n as u64, seed }
    }

    /// `(mean − target)/stderr`; zero-variance estimates give 0 on an exact hit.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d.abs() <= 1e-12 * (1.0 + target.abs()) {
            0.0
        } else {
            f64::INFINITY.copysign(d)
        }
    }
}

/// Evaluate `f` on paths `0..n` of `seed`, in parallel, results in index order.
pub fn mc_map<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&PoissonPath) -> T + Sync,
{
    (0..n as u64).into_par_iter().map(|i| f(&sample_path(seed, i))).collect()
}

/// Monte Carlo mean of a path functional. Deterministic for fixed `(n, seed)`
/// regardless of the number of worker threads.
pub fn mc_estimate<F>(n: usize, seed: u64, f: F) -> McEstimate
where
    F: Fn(&PoissonPath) -> f64 + Sync,
{
    McEstimate::from_samples(&mc_map(n, seed, f), seed)
}

/// Ratio of means `E X / E Y` with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

pub fn ratio_estimate(num: &[f64], den: &[f64]) -> RatioEstimate {
    let n = num.len().min(den.len());
    let nf = n as f64;
    let mx = num[..n].iter().sum::<f64>() / nf;
    let my = den[..n].iter().sum::<f64>() / nf;
    let r = mx / my;
    // Var of the linearized residual X − rY
    let var = num[..n].iter().zip(&den[..n]).map(|(x, y)| (x - r * y).powi(2)).sum::<f64>() / (nf - 1.0).max(1.0);
    RatioEstimate { ratio: r, stderr: (var / nf).sqrt() / my.abs(), n_samples: n as u64 }
}
