use super::projection::{predictable_projection, ProjectedIntegrand};
use crate::chaos::ChaosExpansion;
use crate::grid::{CellSet, SymKernel};
use crate::{ChaosError, Result};

/// `G = E(G | 𝔽_{[s,t]^c}) + ∫_s^t E(D_r G | 𝔽_{[r,t]^c}) dÑ_r`.
#[derive(Debug, Clone)]
pub struct ClarkOcone {
    pub conditional: ChaosExpansion,
    pub integrand: ProjectedIntegrand,
    pub s: f64,
    pub t: f64,
}

impl ClarkOcone {
    /// The stochastic integral over `[s, t]`, exactly.
    pub fn stochastic_part(&self) -> Result<ChaosExpansion> {
        self.integrand.skorohod_between(self.s, self.t)
    }

    /// `conditional + stochastic part`, which should equal `G`.
    pub fn reconstruct(&self) -> Result<ChaosExpansion> {
        self.conditional.add(&self.stochastic_part()?)
    }
}

/// Decompose `G` over `[s, t]`; `s` and `t` are added to the grid if needed.
pub fn clark_ocone(g: &ChaosExpansion, s: f64, t: f64) -> Result<ClarkOcone> {
    if s > t {
        return Err(ChaosError::InvalidInterval(format!("s = {s} > t = {t}")));
    }
    let part = g.partition().refine(&[s, t])?;
    let g = g.lift(&part)?;
    let inside = CellSet::interval(&part, s, t)?;
    let conditional = g.condition(&inside.complement())?;
    let integrand = predictable_projection(&g.mderivative(), t)?;
    Ok(ClarkOcone { conditional, integrand, s, t })
}

/// `Σ_m I_m(g_m·1_{A_m})` with `A_m` the set where at least one coordinate
/// falls in `(s, t]`: the martingale part computed directly on kernels.
pub fn clark_ocone_kernel_route(g: &ChaosExpansion, s: f64, t: f64) -> Result<ChaosExpansion> {
    let part = g.partition().refine(&[s, t])?;
    let g = g.lift(&part)?;
    let inside = CellSet::interval(&part, s, t)?;
    let kernels: Vec<SymKernel> = g
        .kernels()
        .iter()
        .map(|k| {
            let kept = k.entries().filter(|(a, _)| a.iter().any(|&c| inside.contains(c as usize)));
            SymKernel::from_map(k.degree(), &part, kept.map(|(a, v)| (a.to_vec(), v)).collect())
        })
        .collect();
    ChaosExpansion::from_kernels(&part, kernels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Partition;
    use crate::pathsim::{eval_chaos, sample_path};

    fn ones(part: &Partition) -> Vec<f64> {
        vec![1.0; part.cells()]
    }

    #[test]
    fn terminal_compensated_value() {
        let p = Partition::uniform(4).unwrap();
        let g = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&ones(&p), &p).unwrap());
        let co = clark_ocone(&g, 0.0, 1.0).unwrap();
        assert!(co.conditional.is_zero());
        let path = sample_path(2, 2);
        assert_eq!(co.integrand.eval(&path, 0.4), 1.0);
        assert_eq!(co.reconstruct().unwrap(), g);
    }

    #[test]
    fn second_chaos_integrand_is_twice_left_limit() {
        let p = Partition::uniform(4).unwrap();
        let g = ChaosExpansion::from_kernel(SymKernel::tensor_power(&ones(&p), 2, &p).unwrap());
        let co = clark_ocone(&g, 0.0, 1.0).unwrap();
        for i in 0..50 {
            let path = sample_path(6, i);
            for s in [0.1, 0.3, 0.77] {
                assert!((co.integrand.eval(&path, s) - 2.0 * path.compensated_left(s)).abs() < 1e-13);
            }
        }
        assert!(co.reconstruct().unwrap().max_abs_diff(&g).unwrap() < 1e-14);
    }

    #[test]
    fn half_increment() {
        let p = Partition::uniform(2).unwrap();
        let g = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&[1.0, 0.0], &p).unwrap());
        let co = clark_ocone(&g, 0.0, 1.0).unwrap();
        let path = sample_path(0, 0);
        assert_eq!(co.integrand.eval(&path, 0.3), 1.0);
        assert_eq!(co.integrand.eval(&path, 0.8), 0.0);
        assert!(clark_ocone(&g, 0.8, 0.2).is_err());
    }

    #[test]
    fn interior_window_and_kernel_route() {
        let p = Partition::uniform(4).unwrap();
        let g = ChaosExpansion::from_kernels(
            &p,
            vec![
                SymKernel::scalar(1.0, &p),
                SymKernel::from_cell_values(&[1.0, 2.0, -1.0, 0.5], &p).unwrap(),
                SymKernel::tensor_power(&[0.5, 1.0, 1.0, -2.0], 2, &p).unwrap(),
            ],
        )
        .unwrap();
        let co = clark_ocone(&g, 0.25, 0.75).unwrap();
        let martingale = co.stochastic_part().unwrap();
        let kernel = clark_ocone_kernel_route(&g, 0.25, 0.75).unwrap();
        assert!(martingale.max_abs_diff(&kernel).unwrap() < 1e-14);
        assert!(co.reconstruct().unwrap().max_abs_diff(&g).unwrap() < 1e-14);
        let path = sample_path(1, 9);
        let lhs = eval_chaos(&g, &path);
        let rhs = eval_chaos(&co.conditional, &path) + eval_chaos(&martingale, &path);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
