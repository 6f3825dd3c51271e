//! Fixed instances shared by the Monte Carlo and pathwise checks.

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::{CellSet, Partition, SymKernel};
use crate::Result;

/// Uniform grid with `cells` cells, refined so that `1/4, 1/2, 3/4` are grid points.
pub fn catalogue_grid(cells: usize) -> Result<Partition> {
    Partition::uniform(cells)?.refine(&[0.25, 0.5, 0.75])
}

/// `Ñ_b − Ñ_a` as a first-chaos expansion.
pub fn increment(part: &Partition, a: f64, b: f64) -> Result<ChaosExpansion> {
    Ok(ChaosExpansion::from_kernel(SymKernel::indicator(&CellSet::interval(part, a, b)?)))
}

/// `I_n(1_{(a,b]}^{⊗n})`.
pub fn block_integral(part: &Partition, a: f64, b: f64, n: usize) -> Result<ChaosExpansion> {
    let set = CellSet::interval(part, a, b)?;
    let h: Vec<f64> = set.mask().iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
    Ok(ChaosExpansion::from_kernel(SymKernel::tensor_power(&h, n, part)?))
}

/// The integrands `u` the pathwise checks run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    /// `u ≡ 1`.
    Deterministic,
    /// `u_s = Ñ₁`, fully anticipating.
    Terminal,
    /// `u_s = Ñ_{t_k}` on grid cell `k`: adapted.
    Adapted,
    /// Degree-2 mixture: `1 + Ñ_{1/2} + ½I₂(1^{⊗2})` on `[0, ½]`,
    /// `Ñ₁ − ¼I₂(1_{[0,½]} ⊗̃ 1_{(½,1]})` after.
    Mixed,
}

impl Instance {
    pub const ALL: [Instance; 4] = [Instance::Deterministic, Instance::Terminal, Instance::Adapted, Instance::Mixed];

    pub fn tag(self) -> &'static str {
        match self {
            Instance::Deterministic => "deterministic",
            Instance::Terminal => "n1",
            Instance::Adapted => "adapted",
            Instance::Mixed => "mixed2",
        }
    }

    pub fn build(self, part: &Partition) -> Result<ProcessExpansion> {
        match self {
            Instance::Deterministic => ProcessExpansion::deterministic(&vec![1.0; part.cells()], part),
            Instance::Terminal => Ok(ProcessExpansion::constant_in_time(&increment(part, 0.0, 1.0)?)),
            Instance::Adapted => ProcessExpansion::from_fn(part, |k| increment(part, 0.0, part.left(k))),
            Instance::Mixed => {
                let early = ChaosExpansion::constant(1.0, part)
                    .add(&increment(part, 0.0, 0.5)?)?
                    .axpy(0.5, &block_integral(part, 0.0, 1.0, 2)?)?;
                // I₂(sym(1_{[0,½]}⊗1_{(½,1]})) = Ñ_{1/2}·(Ñ₁ − Ñ_{1/2})
                let cross = increment(part, 0.0, 0.5)?.multiply(&increment(part, 0.5, 1.0)?, 2)?;
                let late = increment(part, 0.0, 1.0)?.axpy(-0.25, &cross)?;
                ProcessExpansion::from_fn(part, |k| Ok(if part.left(k) < 0.5 { early.clone() } else { late.clone() }))
            }
        }
    }
}

/// A catalogued random variable with its exact second moment.
#[derive(Debug, Clone)]
pub struct Variable {
    pub tag: &'static str,
    pub value: ChaosExpansion,
}

/// Multiple integrals whose second moments the isometry check estimates.
pub fn variables(part: &Partition) -> Result<Vec<Variable>> {
    let step: Vec<f64> = (0..part.cells()).map(|k| if part.left(k) < 0.5 { 1.0 } else { -2.0 }).collect();
    Ok(vec![
        Variable { tag: "i2_half", value: block_integral(part, 0.0, 0.5, 2)? },
        Variable { tag: "i1_step", value: ChaosExpansion::from_kernel(SymKernel::from_cell_values(&step, part)?) },
        Variable { tag: "i3_full", value: block_integral(part, 0.0, 1.0, 3)? },
        Variable {
            tag: "mixed",
            value: ChaosExpansion::constant(1.0, part)
                .add(&increment(part, 0.0, 0.5)?)?
                .axpy(0.5, &block_integral(part, 0.0, 1.0, 2)?)?,
        },
    ])
}
