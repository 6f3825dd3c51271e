use crate::chaos::ChaosExpansion;
use crate::grid::kernel_internals::binomial;
use crate::grid::{Partition, SymKernel};
use crate::{ChaosError, Result};

/// One term `C(n,k)·I_k(left)·I_{n−k}(right)` of a split tensor power.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSplitTerm {
    pub left: SymKernel,
    pub right: SymKernel,
    pub weight: f64,
}

/// Split `h^{⊗n}·1_{[0,s)∪(t,1]}^{⊗n}` by how many coordinates fall before `s`:
/// term `k` has `left = (h·1_{[0,s)})^{⊗k}`, `right = (h·1_{(t,1]})^{⊗(n−k)}`
/// and weight `C(n,k)`.
pub fn split_tensor_power(h: &[f64], part: &Partition, s: f64, t: f64, n: usize) -> Result<Vec<TensorSplitTerm>> {
    if s > t {
        return Err(ChaosError::InvalidInterval(format!("s = {s} > t = {t}")));
    }
    let (is, it) = (part.require_point(s)?, part.require_point(t)?);
    if h.len() != part.cells() {
        return Err(ChaosError::PartitionMismatch);
    }
    let before: Vec<f64> = h.iter().enumerate().map(|(i, &v)| if i < is { v } else { 0.0 }).collect();
    let after: Vec<f64> = h.iter().enumerate().map(|(i, &v)| if i >= it { v } else { 0.0 }).collect();
    (0..=n)
        .map(|k| {
            Ok(TensorSplitTerm {
                left: SymKernel::tensor_power(&before, k, part)?,
                right: SymKernel::tensor_power(&after, n - k, part)?,
                weight: binomial(n, k),
            })
        })
        .collect()
}

/// `Σ_k weight·I_k(left)·I_{n−k}(right)` via the product formula.
pub fn reassemble_split(terms: &[TensorSplitTerm], degree_cap: usize) -> Result<ChaosExpansion> {
    let Some(first) = terms.first() else {
        return Err(ChaosError::DegenerateInstance("no split terms".into()));
    };
    let mut acc = ChaosExpansion::zero(first.left.partition());
    for term in terms {
        let l = ChaosExpansion::from_kernel(term.left.clone());
        let r = ChaosExpansion::from_kernel(term.right.clone());
        acc = acc.axpy(term.weight, &l.multiply(&r, degree_cap)?)?;
    }
    Ok(acc)
}
