use super::ChaosExpansion;
use crate::grid::kernel_internals::{binomial, factorial};
use crate::grid::SymKernel;
use crate::{ChaosError, Result};

impl ChaosExpansion {
    /// Exact product via the product formula
    /// `I_m(f)I_n(g) = Σ_r r!·C(m,r)·C(n,r)·Σ_l C(r,l)·I_{m+n−r−l}(f ★_r^l g)`.
    ///
    /// Fails with [`ChaosError::DegreeCapExceeded`] instead of truncating.
    pub fn multiply(&self, other: &Self, degree_cap: usize) -> Result<Self> {
        let (a, b) = Self::aligned(self, other)?;
        let part = a.part.clone();
        let (Some(da), Some(db)) = (a.max_degree(), b.max_degree()) else {
            return Ok(Self::zero(&part));
        };
        if da + db > degree_cap {
            return Err(ChaosError::DegreeCapExceeded { cap: degree_cap, needed: da + db });
        }
        let mut acc: Vec<SymKernel> = (0..=da + db).map(|d| SymKernel::zero(d, &part)).collect();
        for (m, f) in a.kernels.iter().enumerate().filter(|(_, k)| !k.is_zero()) {
            for (n, g) in b.kernels.iter().enumerate().filter(|(_, k)| !k.is_zero()) {
                for r in 0..=m.min(n) {
                    let outer = factorial(r) * binomial(m, r) * binomial(n, r);
                    for l in 0..=r {
                        let c = f.contract(g, r, l)?;
                        let d = m + n - r - l;
                        acc[d] = acc[d].axpy(outer * binomial(r, l), &c)?;
                    }
                }
            }
        }
        Ok(Self::trimmed(part, acc))
    }
}
