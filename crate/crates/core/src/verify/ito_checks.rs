//! Pathwise change-of-variables checks, reported in two variants.
//!
//! For `Y^λ = ∫_0^λ h_s dÑ_s` with the predictable integrand `h`, the
//! pure-jump form
//! `f(Y) = f(0) + ∫f′(Y_{s−})h dÑ + Σ[f(Y_s) − f(Y_{s−}) − f′(Y_{s−})ΔY_s]`
//! (variant "qv") and the same formula with an extra `½∫f″(Y_{s−})h² ds`
//! (variant "literal") cannot both hold; both residuals are measured.

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::CellSet;
use crate::pathsim::{mc_map, CompiledChaos, PathTrace, PoissonPath};
use crate::represent::{predictable_projection, ScaledIntegrand};
use crate::{ChaosError, Result};

use super::catalogue::{block_integral, catalogue_grid, increment, Instance};
use super::functions::FunctionSpec;
use super::mc_checks::{eval_on, pathwise_paths};
use super::{CheckConfig, Report, StatKind};

/// Pathwise tolerance of the change-of-variables residuals.
pub const ITO_TOL: f64 = 1e-9;

/// The right-hand-side pieces of the change-of-variables formula on one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItoTerms {
    /// `f(Y_t)` with `Y_t` evaluated directly from its kernel.
    pub lhs: f64,
    pub f0: f64,
    /// `∫_0^t f′(Y_{s−}) h_s dÑ_s`.
    pub stochastic: f64,
    /// `Σ_{s ≤ t} [f(Y_s) − f(Y_{s−}) − f′(Y_{s−})ΔY_s]`.
    pub jumps: f64,
    /// `½∫_0^t f″(Y_{s−}) h_s² ds`: the disputed term.
    pub second: f64,
    /// `½∫_0^t f′(Y_{s−}) h_s² ds`: the same term with `f′` in place of `f″`.
    pub second_first_derivative: f64,
}

impl ItoTerms {
    pub fn from_trace(f: &FunctionSpec, trace: &PathTrace, y_direct: f64) -> Self {
        let stochastic = trace.jump_sum(|l, _, h| f.d1(l) * h) - trace.integrate(|y, h| f.d1(y) * h);
        let jumps = trace.jump_sum(|l, r, h| f.f(r) - f.f(l) - f.d1(l) * h);
        Self {
            lhs: f.f(y_direct),
            f0: f.f(0.0),
            stochastic,
            jumps,
            second: 0.5 * trace.integrate(|y, h| f.d2(y) * h * h),
            second_first_derivative: 0.5 * trace.integrate(|y, h| f.d1(y) * h * h),
        }
    }

    /// Residual of the pure-jump (quadratic-variation) form.
    pub fn residual_qv(&self) -> f64 {
        self.lhs - (self.f0 + self.stochastic + self.jumps)
    }

    /// Residual of the form carrying the extra `½∫f″h² ds`.
    pub fn residual_literal(&self) -> f64 {
        self.lhs - (self.f0 + self.stochastic + self.second + self.jumps)
    }

    /// Residual of the form carrying `½∫f′h² ds`.
    pub fn residual_first_derivative(&self) -> f64 {
        self.lhs - (self.f0 + self.stochastic + self.second_first_derivative + self.jumps)
    }
}

/// Uniform-over-paths summary of [`ItoTerms`] residuals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ItoSummary {
    pub paths: u64,
    pub qv_max: f64,
    pub literal_max: f64,
    /// `max |residual_literal + ½∫f″h²|`: how exactly the literal variant's
    /// residual is the negated disputed term.
    pub literal_vs_disputed_max: f64,
    pub disputed_mean_abs: f64,
    pub disputed_max_abs: f64,
    pub first_derivative_max: f64,
    pub first_derivative_vs_disputed_max: f64,
    /// Largest auxiliary consistency gap (trace terminal vs direct value, …).
    pub consistency_max: f64,
}

impl ItoSummary {
    fn add(&mut self, t: &ItoTerms, consistency: f64) {
        self.paths += 1;
        self.qv_max = self.qv_max.max(t.residual_qv().abs());
        self.literal_max = self.literal_max.max(t.residual_literal().abs());
        self.literal_vs_disputed_max = self.literal_vs_disputed_max.max((t.residual_literal() + t.second).abs());
        self.disputed_mean_abs += t.second.abs();
        self.disputed_max_abs = self.disputed_max_abs.max(t.second.abs());
        self.first_derivative_max = self.first_derivative_max.max(t.residual_first_derivative().abs());
        self.first_derivative_vs_disputed_max =
            self.first_derivative_vs_disputed_max.max((t.residual_first_derivative() + t.second_first_derivative).abs());
        self.consistency_max = self.consistency_max.max(consistency);
    }

    fn finish(mut self) -> Self {
        self.disputed_mean_abs /= self.paths.max(1) as f64;
        self
    }

    /// Fold several summaries into their worst case (means are averaged).
    pub fn merge(items: &[ItoSummary]) -> ItoSummary {
        let mut out = ItoSummary::default();
        for s in items {
            out.paths += s.paths;
            out.qv_max = out.qv_max.max(s.qv_max);
            out.literal_max = out.literal_max.max(s.literal_max);
            out.literal_vs_disputed_max = out.literal_vs_disputed_max.max(s.literal_vs_disputed_max);
            out.disputed_mean_abs += s.disputed_mean_abs * s.paths as f64;
            out.disputed_max_abs = out.disputed_max_abs.max(s.disputed_max_abs);
            out.first_derivative_max = out.first_derivative_max.max(s.first_derivative_max);
            out.first_derivative_vs_disputed_max = out.first_derivative_vs_disputed_max.max(s.first_derivative_vs_disputed_max);
            out.consistency_max = out.consistency_max.max(s.consistency_max);
        }
        out.disputed_mean_abs /= out.paths.max(1) as f64;
        out
    }

    pub fn qv_holds(&self) -> bool {
        self.qv_max <= ITO_TOL
    }

    pub fn literal_holds(&self) -> bool {
        self.literal_max <= ITO_TOL
    }

    fn report(&self, id: &str, seed: u64) -> Report {
        Report::new(id, StatKind::ExactResidual, self.qv_max, 0.0, ITO_TOL)
            .with_samples(self.paths, seed)
            .detail("residual_qv_max", self.qv_max)
            .detail("residual_literal_max", self.literal_max)
            .detail("literal_plus_disputed_max", self.literal_vs_disputed_max)
            .detail("disputed_term_mean_abs", self.disputed_mean_abs)
            .detail("disputed_term_max_abs", self.disputed_max_abs)
            .detail("qv_variant_holds", if self.qv_holds() { 1.0 } else { 0.0 })
            .detail("literal_variant_holds", if self.literal_holds() { 1.0 } else { 0.0 })
            .detail("consistency_max", self.consistency_max)
    }
}

/// Run a per-path trace producer against several functions at once.
fn summarize<P>(fs: &[FunctionSpec], n: usize, seed: u64, per_path: P) -> Result<Vec<ItoSummary>>
where
    P: Fn(&PoissonPath) -> Result<(PathTrace, f64, f64)> + Sync,
{
    let rows: Vec<Result<Vec<(ItoTerms, f64)>>> = mc_map(n, seed, |path| {
        let (trace, y, gap) = per_path(path)?;
        Ok(fs.iter().map(|f| (ItoTerms::from_trace(f, &trace, y), gap)).collect())
    });
    let mut out = vec![ItoSummary::default(); fs.len()];
    for row in rows {
        for (s, (t, gap)) in out.iter_mut().zip(row?) {
            s.add(&t, gap);
        }
    }
    Ok(out.into_iter().map(ItoSummary::finish).collect())
}

/// Both residuals for `Y_t = δ(E(w_·|𝔽_{[·,t]^c})1_{[0,t]})`, for several `f`.
pub fn ito_summaries(fs: &[FunctionSpec], w: &ProcessExpansion, t: f64, n: usize, seed: u64) -> Result<Vec<ItoSummary>> {
    let proj = predictable_projection(w, t)?;
    let y = CompiledChaos::new(&proj.skorohod());
    summarize(fs, n, seed, |path| {
        let trace = proj.trace(path)?;
        let direct = eval_on(&y, path);
        let gap = (trace.terminal() - direct).abs();
        Ok((trace, direct, gap))
    })
}

/// Itô formula residuals for one `f`, one `w` and a grid horizon `t`.
pub fn run_ito_formula(f: &FunctionSpec, w: &ProcessExpansion, t: f64, cfg: &CheckConfig) -> Result<Report> {
    let s = ito_summaries(std::slice::from_ref(f), w, t, pathwise_paths(cfg), cfg.seed)?[0];
    Ok(s.report("ito_formula", cfg.seed).detail("t", t))
}

/// `f(x) = x²`, `w ≡ 1`, `t = 1` on the path with jumps `{0.3, 0.7}`:
/// returns the `(qv, literal)` residuals, which are `(0, −1)` exactly.
pub fn ito_anchor(grid_cells: usize) -> Result<(f64, f64)> {
    let part = catalogue_grid(grid_cells)?;
    let w = Instance::Deterministic.build(&part)?;
    let proj = predictable_projection(&w, 1.0)?;
    let path = PoissonPath::new(vec![0.3, 0.7])?;
    let y = eval_on(&CompiledChaos::new(&proj.skorohod()), &path);
    let t = ItoTerms::from_trace(&FunctionSpec::square(), &proj.trace(&path)?, y);
    Ok((t.residual_qv(), t.residual_literal()))
}

/// The full catalogue: every `f` × instance `u` (through `w` of the
/// Itô–Skorohod representation) × `t ∈ {½, 1}`.
pub fn ito_formula(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let fs = FunctionSpec::catalogue();
    let n = pathwise_paths(cfg);
    let mut all = Vec::new();
    let mut per_f = vec![Vec::new(); fs.len()];
    for inst in Instance::ALL {
        let w = crate::represent::ito_skorohod_w(&inst.build(&part)?)?;
        for t in [0.5, 1.0] {
            for (i, s) in ito_summaries(&fs, &w, t, n, cfg.seed)?.into_iter().enumerate() {
                per_f[i].push(s);
                all.push(s);
            }
        }
    }
    let total = ItoSummary::merge(&all);
    let (a_qv, a_literal) = ito_anchor(cfg.grid_cells)?;
    let mut r = total.report("ito_formula", cfg.seed).with_samples(n as u64, cfg.seed);
    for (f, ss) in fs.iter().zip(&per_f) {
        let m = ItoSummary::merge(ss);
        r = r
            .detail(format!("{}_residual_qv_max", f.tag()), m.qv_max)
            .detail(format!("{}_residual_literal_max", f.tag()), m.literal_max)
            .detail(format!("{}_disputed_term_mean_abs", f.tag()), m.disputed_mean_abs);
    }
    Ok(r.detail("anchor_residual_qv", a_qv)
        .detail("anchor_residual_literal", a_literal)
        .require("anchor", a_qv.abs() <= 1e-12 && (a_literal + 1.0).abs() <= 1e-12)
        .require("exactly_one_variant", total.qv_holds() != total.literal_holds())
        .require("literal_residual_is_disputed_term", total.literal_vs_disputed_max <= ITO_TOL)
        .require("trace_matches_kernel", total.consistency_max <= ITO_TOL))
}

/// Residuals of the change of variables for `Z^λ = M_{λ−}M′_t`, `λ ≤ t`,
/// with `M_λ = E(M₁|𝔽_λ)` and `M′_t = E(H|𝔽_{t^c})`.
///
/// The trace integrates `h_s = a_s·M′_t` with `a_s = E(D_sM₁|𝔽_{s−})`; its
/// consistency gap compares `Z^{τ−}` at every jump and `Z^t` with the
/// directly evaluated products `M_{τ−}M′_t`, `M_tM′_t`.
pub fn prop5_summaries(
    fs: &[FunctionSpec],
    m1: &ChaosExpansion,
    h: &ChaosExpansion,
    t: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<ItoSummary>> {
    if m1.expectation().abs() > 1e-14 {
        return Err(ChaosError::DegenerateInstance("M₁ must be centred".into()));
    }
    let part = m1.partition().common_refinement(h.partition());
    let m1 = m1.lift(&part)?;
    let t_cells = part.require_point(t)?;
    let backward = h.lift(&part)?.condition(&CellSet::from_cells(&part, t_cells..part.cells())?)?;
    let a = predictable_projection(&m1.mderivative(), 1.0)?;
    let m_left = predictable_projection(&ProcessExpansion::constant_in_time(&m1), 1.0)?;
    let m_t = CompiledChaos::new(&m1.condition(&CellSet::from_cells(&part, 0..t_cells)?)?);
    let m_prime = CompiledChaos::new(&backward);
    let integrand = ScaledIntegrand::new(&a, &backward);
    summarize(fs, n, seed, |path| {
        let trace = crate::pathsim::trace(&integrand, path, 0.0, t)?;
        let mp = eval_on(&m_prime, path);
        let z_t = eval_on(&m_t, path) * mp;
        let mut gap = (trace.terminal() - z_t).abs();
        for &tau in path.jumps().iter().filter(|&&j| j <= t) {
            gap = gap.max((trace.left_limit(tau) - m_left.eval(path, tau) * mp).abs());
        }
        Ok((trace, z_t, gap))
    })
}

/// One `(M₁, H, f, t)` instance of the martingale × backward-martingale formula.
pub fn run_prop5(m1: &ChaosExpansion, h: &ChaosExpansion, f: &FunctionSpec, t: f64, cfg: &CheckConfig) -> Result<Report> {
    let s = prop5_summaries(std::slice::from_ref(f), m1, h, t, pathwise_paths(cfg), cfg.seed)?[0];
    Ok(s.report("prop5", cfg.seed)
        .detail("residual_first_derivative_max", s.first_derivative_max)
        .require("product_trace", s.consistency_max <= ITO_TOL))
}

/// Catalogue sweep: centred `M₁` × backward sources `H` × `t ∈ {½, ¾}` × `f`.
pub fn prop5(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let n1 = increment(&part, 0.0, 1.0)?;
    let half = increment(&part, 0.0, 0.5)?;
    let ms = [
        ("n", n1.clone()),
        ("quad", half.axpy(0.5, &block_integral(&part, 0.0, 1.0, 2)?)?),
        ("cross", half.multiply(&increment(&part, 0.5, 1.0)?, 2)?),
    ];
    let hs = [
        ("one", ChaosExpansion::constant(1.0, &part)),
        ("n1", n1.clone()),
        ("sq", ChaosExpansion::constant(1.0, &part).add(&block_integral(&part, 0.0, 1.0, 2)?)?),
    ];
    let fs = FunctionSpec::catalogue();
    let n = pathwise_paths(cfg);
    let mut all = Vec::new();
    let mut details = Vec::new();
    for (mt, m) in &ms {
        for (ht, h) in &hs {
            let mut case = Vec::new();
            for t in [0.5, 0.75] {
                case.extend(prop5_summaries(&fs, m, h, t, n, cfg.seed)?);
            }
            let c = ItoSummary::merge(&case);
            details.push((format!("{mt}_{ht}_residual_qv_max"), c.qv_max));
            all.extend(case);
        }
    }
    let total = ItoSummary::merge(&all);
    let mut r = total.report("prop5", cfg.seed).with_samples(n as u64, cfg.seed);
    for (k, v) in details {
        r = r.detail(k, v);
    }
    Ok(r.require("exactly_one_variant", total.qv_holds() != total.literal_holds())
        .require("literal_residual_is_disputed_term", total.literal_vs_disputed_max <= ITO_TOL)
        .require("product_trace", total.consistency_max <= ITO_TOL))
}

/// `M = Ñ`, `M′ = Ñ₁ − Ñ_t`, `a ≡ 1`, with the second-order term read both
/// with `f″` and with `f′`.
pub fn corollary1(cfg: &CheckConfig) -> Result<Report> {
    let part = catalogue_grid(cfg.grid_cells)?;
    let n1 = increment(&part, 0.0, 1.0)?;
    let fs = FunctionSpec::catalogue();
    let n = pathwise_paths(cfg);
    let mut all = Vec::new();
    for t in [0.25, 0.5, 0.75] {
        all.extend(prop5_summaries(&fs, &n1, &n1, t, n, cfg.seed)?);
    }
    let total = ItoSummary::merge(&all);
    let r = total
        .report("corollary1", cfg.seed)
        .with_samples(n as u64, cfg.seed)
        .detail("residual_first_derivative_max", total.first_derivative_max)
        .detail("first_derivative_plus_term_max", total.first_derivative_vs_disputed_max)
        .detail("first_derivative_variant_holds", if total.first_derivative_max <= ITO_TOL { 1.0 } else { 0.0 });
    Ok(r.require("exactly_one_variant", total.qv_holds() != total.literal_holds())
        .require("literal_residual_is_disputed_term", total.literal_vs_disputed_max <= ITO_TOL)
        .require("product_trace", total.consistency_max <= ITO_TOL))
}
