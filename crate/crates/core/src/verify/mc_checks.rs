//! Monte Carlo and pathwise checks.

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::Partition;
use crate::pathsim::{
    charlier, charlier_series, mc_map, ratio_estimate, CellTable, CompiledChaos, McEstimate, PoissonPath,
};
use crate::represent::{ito_skorohod_w, predictable_projection, ProjectedIntegrand};
use crate::{ChaosError, Result};

use super::catalogue::{block_integral, catalogue_grid, increment, variables, Instance};
use super::{CheckConfig, Report, StatKind};

/// Cap on the number of paths of the pathwise (non-statistical) checks.
pub const PATHWISE_PATHS: usize = 10_000;
/// z-score tolerance of targeted Monte Carlo equalities.
pub const Z_TOL: f64 = 3.0;
/// Mean pathwise gap tolerance for `δ(u1_{[0,t]})` vs the Itô sum.
pub const PROP1_TOL: f64 = 1e-9;
/// Mean pathwise gap tolerance for `X_t` vs the Itô–Skorohod evaluation.
pub const PROP3_TOL: f64 = 1e-8;
/// Agreement of the recurrence and series Charlier evaluations.
pub const CHARLIER_TOL: f64 = 1e-10;
/// Horizons of the pathwise representation checks.
pub const HORIZONS: [f64; 3] = [0.25, 0.5, 1.0];

pub(crate) fn pathwise_paths(cfg: &CheckConfig) -> usize {
    cfg.samples.min(PATHWISE_PATHS)
}

/// Evaluate a compiled expansion on one path.
pub(crate) fn eval_on(c: &CompiledChaos, path: &PoissonPath) -> f64 {
    c.eval(&CellTable::new(c.partition(), path, c.max_degree()))
}

/// Mean and max of `|F(ω) − ∫_0^t h dÑ(ω)|` over `n` paths.
pub fn pathwise_gap(kernel: &ChaosExpansion, h: &ProjectedIntegrand, n: usize, seed: u64) -> Result<(f64, f64)> {
    let compiled = CompiledChaos::new(kernel);
    let gaps: Vec<f64> = mc_map(n, seed, |path| Ok((eval_on(&compiled, path) - h.trace(path)?.terminal()).abs()))
        .into_iter()
        .collect::<Result<_>>()?;
    let mean = gaps.iter().sum::<f64>() / n.max(1) as f64;
    Ok((mean, gaps.iter().fold(0.0, |m: f64, &g| m.max(g))))
}

/// The estimate with the largest `|z|` among `(tag, estimate, target)` rows.
fn worst_z(rows: &[(String, McEstimate, f64)]) -> (f64, f64) {
    rows.iter()
        .map(|(_, e, t)| (e.z_score(*t), e.stderr))
        .fold((0.0, 0.0), |acc, (z, se)| if z.abs() > acc.0.abs() || z.is_nan() { (z, se) } else { acc })
}

/// `E F² = Σ n!‖f_n‖²` for the catalogued multiple integrals.
pub fn isometry(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let vars = variables(&part)?;
    let compiled: Vec<CompiledChaos> = vars.iter().map(|v| CompiledChaos::new(&v.value)).collect();
    let degree = compiled.iter().map(CompiledChaos::max_degree).max().unwrap_or(0);
    let samples: Vec<Vec<f64>> = mc_map(cfg.samples, cfg.seed, |path| {
        let table = CellTable::new(&part, path, degree);
        compiled.iter().map(|c| c.eval(&table).powi(2)).collect()
    });
    let rows: Vec<(String, McEstimate, f64)> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let col: Vec<f64> = samples.iter().map(|s| s[i]).collect();
            (v.tag.to_string(), McEstimate::from_samples(&col, cfg.seed), v.value.second_moment())
        })
        .collect();
    let (z, se) = worst_z(&rows);
    let mut r = Report::new("isometry", StatKind::McZScore, z, 0.0, Z_TOL)
        .with_samples(cfg.samples as u64, cfg.seed)
        .with_stderr(se);
    for (tag, e, t) in &rows {
        r = r.detail(format!("{tag}_estimate"), e.mean).detail(format!("{tag}_target"), *t).detail(format!("{tag}_z"), e.z_score(*t));
    }
    Ok(r)
}

/// Recurrence vs generating-function series for `n ≤ 10`, path identity
/// `I_n(1_B^{⊗n}) = n!·C_n(λ(B), Ñ(B))`, and Monte Carlo orthogonality.
pub fn charlier_consistency(cfg: &CheckConfig) -> Result<Report> {
    let mut series_err: f64 = 0.0;
    for n in 0..=10 {
        for t in [0.1, 0.5, 1.0, 2.0] {
            for x in [-2.0, -0.5, 0.0, 1.0, 3.0, 7.0] {
                let s = charlier_series(n, t, x);
                series_err = series_err.max((charlier(n, t, x) - s).abs() / s.abs().max(1.0));
            }
        }
    }
    let part = catalogue_grid(cfg.grid_cells)?;
    let lam = 0.5;
    let blocks: Vec<CompiledChaos> =
        (1..=3).map(|n| block_integral(&part, 0.0, lam, n).map(|f| CompiledChaos::new(&f))).collect::<Result<_>>()?;
    let pairs = [(1usize, 2usize), (2, 3), (1, 3), (2, 2), (3, 3)];
    let fact = [1.0, 1.0, 2.0, 6.0];
    let samples: Vec<(Vec<f64>, f64)> = mc_map(cfg.samples, cfg.seed, |path| {
        let x = path.compensated(lam);
        let c: Vec<f64> = (0..=3).map(|n| charlier(n, lam, x)).collect();
        let prods = pairs.iter().map(|&(n, m)| c[n] * c[m]).collect();
        let ident = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (eval_on(b, path) - fact[i + 1] * c[i + 1]).abs())
            .fold(0.0, f64::max);
        (prods, ident)
    });
    let ident_err = samples.iter().fold(0.0, |m: f64, s| m.max(s.1));
    let rows: Vec<(String, McEstimate, f64)> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(n, m))| {
            let col: Vec<f64> = samples.iter().map(|s| s.0[i]).collect();
            let target = if n == m { lam.powi(n as i32) / fact[n] } else { 0.0 };
            (format!("c{n}c{m}"), McEstimate::from_samples(&col, cfg.seed), target)
        })
        .collect();
    let (z, se) = worst_z(&rows);
    let mut r = Report::new("charlier_consistency", StatKind::McZScore, z, 0.0, Z_TOL)
        .with_samples(cfg.samples as u64, cfg.seed)
        .with_stderr(se)
        .detail("series_max_error", series_err)
        .detail("path_identity_max_error", ident_err);
    for (tag, e, t) in &rows {
        r = r.detail(format!("{tag}_z"), e.z_score(*t));
    }
    Ok(r.require("series", series_err <= CHARLIER_TOL).require("path_identity", ident_err <= CHARLIER_TOL))
}

/// Integrands `w` whose projections form the predictable catalogue.
fn predictable_sources(part: &Partition) -> Result<Vec<(&'static str, ProcessExpansion)>> {
    let mut out: Vec<(&'static str, ProcessExpansion)> =
        Instance::ALL.iter().map(|i| Ok((i.tag(), i.build(part)?))).collect::<Result<_>>()?;
    let prod = increment(part, 0.0, 1.0)?.multiply(&increment(part, 0.0, 0.5)?, 2)?;
    out.push(("product", ProcessExpansion::constant_in_time(&prod)));
    Ok(out)
}

/// `δ(u·1_{[0,t]})` (exact kernel) against the pathwise Itô integral, for
/// `u = E(w_·|𝔽_{[·,t]^c})`, which is predictable for `𝔽_{(·,t]^c}`.
pub fn prop1_equivalence(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let n = pathwise_paths(cfg);
    let mut worst: f64 = 0.0;
    let mut worst_max: f64 = 0.0;
    let mut details = Vec::new();
    for (tag, w) in predictable_sources(&part)? {
        for t in HORIZONS {
            let proj = predictable_projection(&w, t)?;
            let (mean, max) = pathwise_gap(&proj.skorohod(), &proj, n, cfg.seed)?;
            worst = worst.max(mean);
            worst_max = worst_max.max(max);
            details.push((format!("{tag}_t{t}_mean_gap"), mean));
        }
    }
    let mut r = Report::new("prop1_equivalence", StatKind::ExactResidual, worst, 0.0, PROP1_TOL)
        .with_samples(n as u64, cfg.seed)
        .detail("max_gap", worst_max);
    for (k, v) in details {
        r = r.detail(k, v);
    }
    Ok(r)
}

/// `X_t = δ(u1_{[0,t]})` against `∫_0^t E(w_s|𝔽_{[s,t]^c}) dÑ_s` pathwise.
pub fn prop3_pathwise(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let n = pathwise_paths(cfg);
    let mut worst: f64 = 0.0;
    let mut worst_max: f64 = 0.0;
    let mut details = Vec::new();
    for inst in [Instance::Terminal, Instance::Adapted, Instance::Mixed] {
        let u = inst.build(&part)?;
        let w = ito_skorohod_w(&u)?;
        for t in HORIZONS {
            let x = u.indefinite_skorohod(t)?;
            let (mean, max) = pathwise_gap(&x, &predictable_projection(&w, t)?, n, cfg.seed)?;
            worst = worst.max(mean);
            worst_max = worst_max.max(max);
            details.push((format!("{}_t{t}_mean_gap", inst.tag()), mean));
        }
    }
    let mut r = Report::new("prop3_pathwise", StatKind::ExactResidual, worst, 0.0, PROP3_TOL)
        .with_samples(n as u64, cfg.seed)
        .detail("max_gap", worst_max);
    for (k, v) in details {
        r = r.detail(k, v);
    }
    Ok(r)
}

/// Burkholder moments `E|Y_t|^p` and `E(∫ĥ² dN)^{p/2}` for one integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurkholderRatio {
    pub p: f64,
    pub ratio: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

/// `E|Y_t|^p / E(∫_0^t E(w_s|𝔽_{[s,t]^c})² dN_s)^{p/2}` by Monte Carlo.
pub fn burkholder_ratio(w: &ProcessExpansion, t: f64, p: f64, n: usize, seed: u64) -> Result<BurkholderRatio> {
    if w.is_zero() {
        return Err(ChaosError::DegenerateInstance("w ≡ 0 gives a zero denominator".into()));
    }
    if p < 1.0 {
        return Err(ChaosError::DegenerateInstance(format!("p = {p} < 1")));
    }
    let proj = predictable_projection(w, t)?;
    let y = CompiledChaos::new(&proj.skorohod());
    let pairs: Vec<(f64, f64)> = mc_map(n, seed, |path| {
        let tr = proj.trace(path)?;
        let qv = tr.jump_sum(|_, _, h| h * h);
        Ok((eval_on(&y, path).abs().powf(p), qv.powf(p / 2.0)))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (num, den): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    if den.iter().all(|&d| d == 0.0) {
        return Err(ChaosError::DegenerateInstance("quadratic variation vanished on every path".into()));
    }
    let est = ratio_estimate(&num, &den);
    Ok(BurkholderRatio { p, ratio: est.ratio, stderr: est.stderr, n_samples: est.n_samples })
}

/// `run_burkholder` for one `p` and one catalogued integrand at `t = 1`.
pub fn run_burkholder(p: f64, w: &ProcessExpansion, cfg: &CheckConfig) -> Result<Report> {
    let b = burkholder_ratio(w, 1.0, p, cfg.samples, cfg.seed)?;
    let r = if p == 2.0 {
        Report::new("burkholder", StatKind::Ratio, b.ratio, 1.0, Z_TOL * b.stderr)
    } else {
        let ok = b.ratio.is_finite() && b.ratio > 0.0;
        Report::new("burkholder", StatKind::Ratio, b.ratio, b.ratio, 0.0).require("finite_positive", ok)
    };
    Ok(r.with_samples(b.n_samples, cfg.seed).with_stderr(b.stderr).detail("p", p))
}

/// All catalogued integrands, `p ∈ {1, 2, 4}`; the headline is the `p = 2`
/// ratio farthest (in standard errors) from 1.
pub fn burkholder(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let mut details = Vec::new();
    let mut head: Option<BurkholderRatio> = None;
    let mut finite_positive = true;
    for inst in [Instance::Deterministic, Instance::Terminal, Instance::Mixed] {
        let w = inst.build(&part)?;
        for p in [1.0, 2.0, 4.0] {
            let b = burkholder_ratio(&w, 1.0, p, cfg.samples, cfg.seed)?;
            details.push((format!("{}_p{p}_ratio", inst.tag()), b.ratio));
            details.push((format!("{}_p{p}_stderr", inst.tag()), b.stderr));
            finite_positive &= b.ratio.is_finite() && b.ratio > 0.0 && b.stderr.is_finite();
            if p == 2.0 {
                let dev = |x: &BurkholderRatio| (x.ratio - 1.0).abs() / x.stderr.max(f64::MIN_POSITIVE);
                if head.as_ref().is_none_or(|h| dev(&b) > dev(h)) {
                    head = Some(b);
                }
            }
        }
    }
    let head = head.expect("catalogue is nonempty");
    let mut r = Report::new("burkholder", StatKind::Ratio, head.ratio, 1.0, Z_TOL * head.stderr)
        .with_samples(head.n_samples, cfg.seed)
        .with_stderr(head.stderr);
    for (k, v) in details {
        r = r.detail(k, v);
    }
    Ok(r.require("finite_positive", finite_positive))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CheckConfig {
        CheckConfig { samples: 2000, grid_cells: 4, ..CheckConfig::default() }
    }

    #[test]
    fn pathwise_checks_pass_small() {
        let cfg = CheckConfig { samples: 200, ..small() };
        for r in [prop1_equivalence(&cfg).unwrap(), prop3_pathwise(&cfg).unwrap()] {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn charlier_side_conditions_hold() {
        let r = charlier_consistency(&small()).unwrap();
        assert_eq!(r.detail_value("series_ok"), Some(1.0));
        assert_eq!(r.detail_value("path_identity_ok"), Some(1.0));
    }

    #[test]
    fn burkholder_zero_integrand_is_degenerate() {
        let part = catalogue_grid(4).unwrap();
        let err = burkholder_ratio(&ProcessExpansion::zero(&part), 1.0, 2.0, 10, 1).unwrap_err();
        assert!(matches!(err, ChaosError::DegenerateInstance(_)));
    }

    #[test]
    fn burkholder_p2_deterministic_is_compensation() {
        let part = catalogue_grid(4).unwrap();
        let w = Instance::Deterministic.build(&part).unwrap();
        // for w ≡ 1 both moments are Ñ₁² and N₁ pathwise
        let r = run_burkholder(2.0, &w, &small()).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
