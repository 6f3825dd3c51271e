//! Exact (kernel-level) checks on Skorohod integral processes as a whole.

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::{Partition, SymKernel};
use crate::represent::{approximation_gaps, ApproximationGaps};
use crate::Result;

use super::catalogue::{catalogue_grid, Instance};
use super::{CheckConfig, Report, StatKind};

/// Final gap allowed as a fraction of `V(X)`.
pub const THEOREM1_FRACTION: f64 = 0.05;
/// Relative slack allowed when testing that the gaps do not increase.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Dyadic approximation gaps for one integrand.
pub fn run_theorem1(u: &ProcessExpansion, depths: &[u32], cfg: &CheckConfig) -> Result<Report> {
    let ApproximationGaps { depths, gaps, v_x } = approximation_gaps(u, depths, cfg.degree_cap)?;
    let last = gaps.last().copied().unwrap_or(f64::NAN);
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK) + f64::EPSILON);
    let ratio = if v_x > 0.0 { last / v_x } else { last };
    let mut r = Report::new("theorem1", StatKind::Ratio, ratio, 0.0, THEOREM1_FRACTION)
        .with_samples(0, cfg.seed)
        .detail("v_x", v_x)
        .detail("final_gap", last);
    for (d, g) in depths.iter().zip(&gaps) {
        r = r.detail(format!("gap_depth_{d}"), *g);
    }
    Ok(r.require("nonincreasing", monotone))
}

/// `u = Ñ₁` over the configured depths.
pub fn theorem1(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    run_theorem1(&Instance::Terminal.build(&part)?, &cfg.depths, cfg)
}

/// Exponents `k` of the step sizes `h = 2^{−k}`.
pub const CADLAG_STEPS: [i32; 5] = [3, 4, 5, 6, 7];
/// Lower bound on the fitted slope.
pub const CADLAG_SLOPE_MIN: f64 = 1.8;
/// Centre of the increments.
pub const CADLAG_T: f64 = 0.5;

/// `E|(X_{t+h}−X_t)(X_t−X_{t−h})|²` exactly, for `X = ∫ u δÑ`, with `u`
/// given as a function of the cell on a grid containing `t ± h`.
pub fn cadlag_moment_at(u: &dyn Fn(&Partition) -> Result<ProcessExpansion>, h: f64, cap: usize) -> Result<f64> {
    let t = CADLAG_T;
    let part = Partition::new(vec![0.0, t - h, t, t + h, 1.0])?;
    let u = u(&part)?;
    let up = u.indefinite_skorohod(t + h)?.sub(&u.indefinite_skorohod(t)?)?;
    let down = u.indefinite_skorohod(t)?.sub(&u.indefinite_skorohod(t - h)?)?;
    Ok(up.multiply(&down, cap)?.second_moment())
}

/// Least-squares slope of `log m` against `log h`.
pub fn loglog_slope(hs: &[f64], ms: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = ms.iter().map(|m| m.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Bounded integrand: `1` on `[0, ½]`, `1.5` after.
fn bounded_step(part: &Partition) -> Result<ProcessExpansion> {
    let h: Vec<f64> = (0..part.cells()).map(|k| if part.left(k) < CADLAG_T { 1.0 } else { 1.5 }).collect();
    ProcessExpansion::deterministic(&h, part)
}

fn terminal(part: &Partition) -> Result<ProcessExpansion> {
    let n1 = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&vec![1.0; part.cells()], part)?);
    Ok(ProcessExpansion::constant_in_time(&n1))
}

/// Scaling of the càdlàg moment, exact at every `h`.
pub fn cadlag_moment(cfg: &CheckConfig) -> Result<Report> {
    let hs: Vec<f64> = CADLAG_STEPS.iter().map(|&k| 2f64.powi(-k)).collect();
    let bounded = hs.iter().map(|&h| cadlag_moment_at(&bounded_step, h, cfg.degree_cap)).collect::<Result<Vec<_>>>()?;
    let unbounded = hs.iter().map(|&h| cadlag_moment_at(&terminal, h, cfg.degree_cap)).collect::<Result<Vec<_>>>()?;
    let slope = loglog_slope(&hs, &bounded);
    let mut r = Report::new("cadlag_moment", StatKind::Slope, slope, 2.0, 2.0 - CADLAG_SLOPE_MIN)
        .with_samples(0, cfg.seed)
        .detail("n1_slope", loglog_slope(&hs, &unbounded));
    for (k, m) in CADLAG_STEPS.iter().zip(&bounded) {
        r = r.detail(format!("moment_h2^-{k}"), *m);
    }
    Ok(r)
}
