use std::collections::BTreeMap;

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::kernel_internals::Index;
use crate::grid::{CellSet, Partition, SymKernel};
use crate::pathsim::{charlier_table, trace, CellTable, CompiledChaos, PathIntegrand, PathTrace, PoissonPath};
use crate::{ChaosError, Result};

/// `s ↦ E(w_s | 𝔽_{[s,t]^c})` for a step process `w` and grid horizon `t`.
///
/// For `s` inside cell `k ≤ t` the conditional expectation keeps the cells
/// before `k`, the part `[t_k, s)` of cell `k` and everything after `t`.
/// That is not a step function of `s`, so it is exposed through an exact
/// pathwise evaluator and through exact Skorohod integrals over grid intervals.
#[derive(Debug, Clone)]
pub struct ProjectedIntegrand {
    base: ProcessExpansion,
    t: f64,
    t_cells: usize,
    compiled: Vec<CompiledChaos>,
    degree: usize,
}

/// Projection of `w` at horizon `t` (a grid point of `w`).
pub fn predictable_projection(w: &ProcessExpansion, t: f64) -> Result<ProjectedIntegrand> {
    let t_cells = w.partition().require_point(t)?;
    let compiled = w.slices().iter().map(CompiledChaos::new).collect();
    Ok(ProjectedIntegrand { base: w.clone(), t, t_cells, compiled, degree: w.max_degree().unwrap_or(0) })
}

impl ProjectedIntegrand {
    pub fn base(&self) -> &ProcessExpansion {
        &self.base
    }

    pub fn horizon(&self) -> f64 {
        self.t
    }

    pub fn partition(&self) -> &Partition {
        self.base.partition()
    }

    /// Kernel of the projection just after the left end of cell `k`:
    /// `E(W_k | 𝔽_{(t_k, t]^c})`.
    pub fn at_cell_start(&self, k: usize) -> Result<ChaosExpansion> {
        let part = self.partition();
        if k >= self.t_cells {
            return Ok(self.base.slice(k).clone());
        }
        let keep = CellSet::from_cells(part, (0..k).chain(self.t_cells..part.cells()))?;
        self.base.slice(k).condition(&keep)
    }

    /// Pathwise value at time `s`.
    pub fn eval(&self, path: &PoissonPath, s: f64) -> f64 {
        self.bind(path)(s)
    }

    fn eval_with(&self, table: &CellTable, path: &PoissonPath, s: f64, row: &mut [f64]) -> f64 {
        let part = self.partition();
        let k = part.cell_of(s);
        if k >= self.t_cells || s > self.t {
            return self.compiled[k].eval(table);
        }
        let t_k = part.left(k);
        let lam = (s - t_k).max(0.0);
        let jumps = path.count_before(s) - path.count_to(t_k);
        charlier_table(self.degree, lam, jumps as f64 - lam, row);
        self.compiled[k].eval_masked(table, Some((k, row)), k + 1..self.t_cells)
    }

    /// `δ(1_{[lo,hi]}·E(w_· | 𝔽_{[·,t]^c}))` for grid points `lo ≤ hi ≤ t`, exactly.
    ///
    /// With `n+1` points in cells `a`, only the last point inside `[0, t]` can
    /// play the time variable, so the symmetrized kernel is
    /// `W_j[a∖j]/(n+1)` where `j` is that point's cell, provided every other
    /// cell of `a` lies before `j` or after `t`.
    pub fn skorohod_between(&self, lo: f64, hi: f64) -> Result<ChaosExpansion> {
        let part = self.partition();
        let i_lo = part.require_point(lo)?;
        let i_hi = part.require_point(hi)?;
        if i_lo > i_hi || i_hi > self.t_cells {
            return Err(ChaosError::InvalidInterval(format!("[{lo}, {hi}] within [0, {}]", self.t)));
        }
        let top = self.degree + 2;
        let mut maps: Vec<BTreeMap<Index, f64>> = vec![BTreeMap::new(); top];
        for j in i_lo..i_hi {
            let jc = j as u16;
            let tc = self.t_cells as u16;
            for (n, k) in self.base.slice(j).kernels().iter().enumerate() {
                for (a, v) in k.entries() {
                    if !a.iter().all(|&c| c <= jc || c >= tc) {
                        continue;
                    }
                    let pos = a.partition_point(|&c| c <= jc);
                    let mut full = Vec::with_capacity(n + 1);
                    full.extend_from_slice(&a[..pos]);
                    full.push(jc);
                    full.extend_from_slice(&a[pos..]);
                    *maps[n + 1].entry(full).or_insert(0.0) += v / (n + 1) as f64;
                }
            }
        }
        let kernels = maps.into_iter().enumerate().map(|(d, m)| SymKernel::from_map(d, part, m)).collect();
        ChaosExpansion::from_kernels(part, kernels)
    }

    /// `Y_t = δ(E(w_·|𝔽_{[·,t]^c})·1_{[0,t]})`.
    pub fn skorohod(&self) -> ChaosExpansion {
        self.skorohod_between(0.0, self.t).expect("horizon is a grid point")
    }

    /// `λ ↦ Y_t^λ = ∫_0^λ E(w_s|𝔽_{[s,t]^c}) dÑ_s` on `[0, t]`.
    pub fn trace(&self, path: &PoissonPath) -> Result<PathTrace> {
        trace(self, path, 0.0, self.t)
    }
}

impl PathIntegrand for ProjectedIntegrand {
    fn degree(&self) -> usize {
        self.degree
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.partition().points().to_vec()
    }

    fn bind<'a>(&'a self, path: &'a PoissonPath) -> Box<dyn Fn(f64) -> f64 + 'a> {
        let table = CellTable::new(self.partition(), path, self.degree);
        Box::new(move |s| {
            let mut row = vec![0.0; self.degree + 1];
            self.eval_with(&table, path, s, &mut row)
        })
    }
}

/// `s ↦ c(ω)·h_s(ω)` for a pathwise integrand `h` and a random factor `c`.
pub struct ScaledIntegrand<'a> {
    inner: &'a dyn PathIntegrand,
    factor: CompiledChaos,
}

impl<'a> ScaledIntegrand<'a> {
    pub fn new(inner: &'a dyn PathIntegrand, factor: &ChaosExpansion) -> Self {
        Self { inner, factor: CompiledChaos::new(factor) }
    }
}

impl PathIntegrand for ScaledIntegrand<'_> {
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }

    fn bind<'b>(&'b self, path: &'b PoissonPath) -> Box<dyn Fn(f64) -> f64 + 'b> {
        let table = CellTable::new(self.factor.partition(), path, self.factor.max_degree());
        let c = self.factor.eval(&table);
        let h = self.inner.bind(path);
        Box::new(move |s| c * h(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathsim::{eval_chaos, ito_integral, sample_path};

    fn n1(part: &Partition) -> ChaosExpansion {
        ChaosExpansion::from_kernel(SymKernel::from_cell_values(&vec![1.0; part.cells()], part).unwrap())
    }

    #[test]
    fn projection_of_terminal_value() {
        let p = Partition::uniform(4).unwrap();
        let w = ProcessExpansion::constant_in_time(&n1(&p));
        let full = predictable_projection(&w, 1.0).unwrap();
        let half = predictable_projection(&w, 0.5).unwrap();
        for i in 0..200 {
            let path = sample_path(3, i);
            for s in [0.0, 0.1, 0.25, 0.4, 0.6, 0.9, 1.0] {
                let want = path.compensated_left(s);
                assert!((full.eval(&path, s) - want).abs() < 1e-13);
                if s <= 0.5 {
                    let want = want + path.increment(0.5, 1.0);
                    assert!((half.eval(&path, s) - want).abs() < 1e-13);
                }
            }
        }
        assert!(predictable_projection(&w, 0.3).is_err());
    }

    #[test]
    fn deterministic_integrand_is_unchanged() {
        let p = Partition::uniform(4).unwrap();
        let w = ProcessExpansion::deterministic(&[1.0, 2.0, -1.0, 0.5], &p).unwrap();
        let pr = predictable_projection(&w, 0.75).unwrap();
        let path = sample_path(1, 1);
        assert_eq!(pr.eval(&path, 0.3), 2.0);
        assert_eq!(pr.skorohod(), w.indefinite_skorohod(0.75).unwrap());
    }

    #[test]
    fn grid_aligned_values_match_conditioning() {
        let p = Partition::uniform(4).unwrap();
        let f2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, -0.5, 2.0, 1.0], 2, &p).unwrap());
        let w = ProcessExpansion::from_fn(&p, |k| f2.scale(1.0 + k as f64).add(&n1(&p))).unwrap();
        let pr = predictable_projection(&w, 0.75).unwrap();
        for i in 0..100 {
            let path = sample_path(4, i);
            for k in 0..3 {
                let start = pr.at_cell_start(k).unwrap();
                let s = if k == 0 { 1e-300 } else { f64::from_bits(p.left(k).to_bits() + 1) };
                assert!((pr.eval(&path, s) - eval_chaos(&start, &path)).abs() < 1e-12);
                // the left end of the next cell, seen from inside cell k
                let keep = CellSet::from_cells(&p, (0..k + 1).chain(3..4)).unwrap();
                let end = w.slice(k).condition(&keep).unwrap();
                assert!((pr.eval(&path, p.left(k + 1)) - eval_chaos(&end, &path)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projected_skorohod_is_the_ito_integral() {
        let p = Partition::uniform(2).unwrap();
        let w = ProcessExpansion::constant_in_time(&n1(&p));
        let pr = predictable_projection(&w, 1.0).unwrap();
        let y = pr.skorohod();
        let path = PoissonPath::new(vec![0.3, 0.7]).unwrap();
        assert!((eval_chaos(&y, &path) + 0.5).abs() < 1e-14);
        assert!((ito_integral(&pr, &path, 1.0).unwrap() + 0.5).abs() < 1e-14);
        assert!(pr.skorohod_between(0.5, 0.0).is_err());
    }
}
