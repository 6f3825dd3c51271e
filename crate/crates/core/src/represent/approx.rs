use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::{CellSet, Partition, SymKernel};
use crate::{ChaosError, Result};

use super::ito_skorohod::ito_skorohod_w;

/// Step approximation `w^π` of `w` on the cells of `π`: on cell `i`,
/// `F_i = (1/Δ_i)∫_{cell i} E(w_s | 𝔽_{[t_i,t_{i+1}]^c}) ds`.
///
/// The result lives on the common refinement of `π` and the grid of `w`.
/// When `w` is a grid representative from [`ito_skorohod_w`], `π` must be
/// no finer than the grid `w` was built on.
pub fn pi_approximation(w: &ProcessExpansion, pi: &Partition) -> Result<ProcessExpansion> {
    let fine = w.partition().common_refinement(pi);
    let w = w.lift(&fine)?;
    let children = pi.children_in(&fine)?;
    let mut slices = vec![ChaosExpansion::zero(&fine); fine.cells()];
    for (i, range) in children.into_iter().enumerate() {
        let outside = CellSet::from_cells(&fine, range.clone())?.complement();
        let delta = pi.len(i);
        let mut f_i = ChaosExpansion::zero(&fine);
        for k in range.clone() {
            f_i = f_i.axpy(fine.len(k) / delta, &w.slice(k).condition(&outside)?)?;
        }
        for k in range {
            slices[k] = f_i.clone();
        }
    }
    ProcessExpansion::new(&fine, slices)
}

/// One summand `factor·(Ñ_b − Ñ_a)` of the forward–backward representation.
#[derive(Debug, Clone, PartialEq)]
pub struct FbTerm {
    pub factor: ChaosExpansion,
    pub interval: (f64, f64),
}

/// `Y^π_t = Σ_{t_i < t} E(F_i | 𝔽_{(t_i, t_{i+1}∨t]^c})·(Ñ_{t∧t_{i+1}} − Ñ_{t_i})`
/// for a step process `w_pi` on `π` (stored on any refinement of `π`
/// containing `t`).
pub fn forward_backward(w_pi: &ProcessExpansion, pi: &Partition, t: f64) -> Result<Vec<FbTerm>> {
    let fine = w_pi.partition();
    fine.require_point(t)?;
    let children = pi.children_in(fine)?;
    let mut out = Vec::new();
    for (i, range) in children.into_iter().enumerate() {
        let ti = pi.left(i);
        let ti1 = if i + 1 == pi.cells() { 1.0 } else { pi.points()[i + 1] };
        if ti >= t {
            break;
        }
        let f_i = w_pi.slice(range.start);
        let removed = CellSet::interval(fine, ti, ti1.max(t))?;
        out.push(FbTerm { factor: f_i.condition(&removed.complement())?, interval: (ti, ti1.min(t)) });
    }
    Ok(out)
}

/// `Σ factor·I₁(1_{(a,b]})` via the product formula.
pub fn assemble_forward_backward(terms: &[FbTerm], part: &Partition, degree_cap: usize) -> Result<ChaosExpansion> {
    let mut acc = ChaosExpansion::zero(part);
    for term in terms {
        let inc = ChaosExpansion::from_kernel(SymKernel::indicator(&CellSet::interval(part, term.interval.0, term.interval.1)?));
        acc = acc.add(&term.factor.multiply(&inc, degree_cap)?)?;
    }
    Ok(acc)
}

/// A process known at the dyadic points `k/2^depth`.
#[derive(Debug, Clone)]
pub struct DyadicFamily {
    depth: u32,
    values: Vec<ChaosExpansion>,
}

impl DyadicFamily {
    pub fn new(depth: u32, values: Vec<ChaosExpansion>) -> Result<Self> {
        if values.len() != (1usize << depth) + 1 {
            return Err(ChaosError::DegreeMismatch { expected: (1 << depth) + 1, got: values.len() });
        }
        Ok(Self { depth, values })
    }

    pub fn from_fn(depth: u32, mut f: impl FnMut(f64) -> Result<ChaosExpansion>) -> Result<Self> {
        let n = 1usize << depth;
        let values = (0..=n).map(|k| f(k as f64 / n as f64)).collect::<Result<_>>()?;
        Ok(Self { depth, values })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[ChaosExpansion] {
        &self.values
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.depth != other.depth {
            return Err(ChaosError::PartitionMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(Self { depth: self.depth, values })
    }

    /// `Σ_i E(X_{t_{i+1}} − X_{t_i})²` on the dyadic partition of depth `d`.
    pub fn quadratic_variation(&self, d: u32) -> Result<f64> {
        if d > self.depth {
            return Err(ChaosError::InvalidInterval(format!("depth {d} beyond {}", self.depth)));
        }
        let step = 1usize << (self.depth - d);
        let mut s = 0.0;
        for i in (0..self.values.len() - 1).step_by(step) {
            s += self.values[i + step].sub(&self.values[i])?.second_moment();
        }
        Ok(s)
    }
}

/// `max_d Σ_i E(ΔX)²` over the given dyadic depths — a lower bound for `V(X)`.
pub fn v_norm(x: &DyadicFamily, depths: &[u32]) -> Result<f64> {
    depths.iter().try_fold(0.0f64, |m, &d| Ok(m.max(x.quadratic_variation(d)?)))
}

/// Exact forward–backward approximation gaps `V(X − Y^{π_d})` for the
/// dyadic partitions `π_d`, with `V` taken over depths `0..=max(depths)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationGaps {
    pub depths: Vec<u32>,
    pub gaps: Vec<f64>,
    pub v_x: f64,
}

pub fn approximation_gaps(u: &ProcessExpansion, depths: &[u32], degree_cap: usize) -> Result<ApproximationGaps> {
    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let fine = u.partition().common_refinement(&Partition::dyadic(max_depth)?);
    let u = u.lift(&fine)?;
    let w = ito_skorohod_w(&u)?;
    let x = DyadicFamily::from_fn(max_depth, |t| u.indefinite_skorohod(t))?;
    let all: Vec<u32> = (0..=max_depth).collect();
    let v_x = v_norm(&x, &all)?;
    let mut gaps = Vec::with_capacity(depths.len());
    for &d in depths {
        let pi = Partition::dyadic(d)?;
        let w_pi = pi_approximation(&w, &pi)?;
        let y = DyadicFamily::from_fn(max_depth, |t| {
            assemble_forward_backward(&forward_backward(&w_pi, &pi, t)?, &fine, degree_cap)
        })?;
        gaps.push(v_norm(&x.sub(&y)?, &all)?);
    }
    Ok(ApproximationGaps { depths: depths.to_vec(), gaps, v_x })
}
