use std::collections::BTreeMap;

use super::ChaosExpansion;
use crate::grid::kernel_internals::Index;
use crate::grid::{CellSet, Partition, SymKernel};
use crate::{ChaosError, Result};

/// A process `u_s = Σ_n I_n(f_n(·, s))`, piecewise constant in `s` on the grid.
///
/// Stored as one [`ChaosExpansion`] per time cell: slice `k` is the value of
/// `u_s` for `s` in cell `k`. This is the kernel with the time argument in the
/// last slot, cut along that slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessExpansion {
    part: Partition,
    slices: Vec<ChaosExpansion>,
}

impl ProcessExpansion {
    pub fn new(part: &Partition, slices: Vec<ChaosExpansion>) -> Result<Self> {
        if slices.len() != part.cells() {
            return Err(ChaosError::PartitionMismatch);
        }
        let slices = slices.into_iter().map(|s| s.lift(part)).collect::<Result<_>>()?;
        Ok(Self { part: part.clone(), slices })
    }

    pub(crate) fn from_slices_unchecked(part: Partition, slices: Vec<ChaosExpansion>) -> Self {
        Self { part, slices }
    }

    pub fn zero(part: &Partition) -> Self {
        Self { part: part.clone(), slices: vec![ChaosExpansion::zero(part); part.cells()] }
    }

    /// `u_s = F` for all `s`.
    pub fn constant_in_time(f: &ChaosExpansion) -> Self {
        Self { part: f.partition().clone(), slices: vec![f.clone(); f.partition().cells()] }
    }

    /// Deterministic step function with per-cell values `h`.
    pub fn deterministic(h: &[f64], part: &Partition) -> Result<Self> {
        if h.len() != part.cells() {
            return Err(ChaosError::PartitionMismatch);
        }
        Ok(Self { part: part.clone(), slices: h.iter().map(|&c| ChaosExpansion::constant(c, part)).collect() })
    }

    /// Build slice by slice.
    pub fn from_fn(part: &Partition, mut f: impl FnMut(usize) -> Result<ChaosExpansion>) -> Result<Self> {
        let slices = (0..part.cells()).map(&mut f).collect::<Result<_>>()?;
        Self::new(part, slices)
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn slices(&self) -> &[ChaosExpansion] {
        &self.slices
    }

    /// Value on time cell `k`.
    pub fn slice(&self, k: usize) -> &ChaosExpansion {
        &self.slices[k]
    }

    /// Value at time `s`.
    pub fn at(&self, s: f64) -> &ChaosExpansion {
        &self.slices[self.part.cell_of(s)]
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.slices.iter().filter_map(ChaosExpansion::max_degree).max()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(ChaosExpansion::is_zero)
    }

    pub fn lift(&self, finer: &Partition) -> Result<Self> {
        if finer == &self.part {
            return Ok(self.clone());
        }
        let children = self.part.children_in(finer)?;
        let mut slices = vec![ChaosExpansion::zero(finer); finer.cells()];
        for (k, range) in children.into_iter().enumerate() {
            let lifted = self.slices[k].lift(finer)?;
            for j in range {
                slices[j] = lifted.clone();
            }
        }
        Ok(Self { part: finer.clone(), slices })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.part == other.part {
            return Ok((self.clone(), other.clone()));
        }
        let common = self.part.common_refinement(&other.part);
        Ok((self.lift(&common)?, other.lift(&common)?))
    }

    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let slices = a.slices.iter().zip(&b.slices).map(|(x, y)| x.axpy(c, y)).collect::<Result<_>>()?;
        Ok(Self { part: a.part, slices })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { part: self.part.clone(), slices: self.slices.iter().map(|s| s.scale(c)).collect() }
    }

    /// `s ↦ F·u_s`.
    pub fn mul_variable(&self, f: &ChaosExpansion, degree_cap: usize) -> Result<Self> {
        let common = self.part.common_refinement(f.partition());
        let u = self.lift(&common)?;
        let f = f.lift(&common)?;
        let slices = u.slices.iter().map(|s| s.multiply(&f, degree_cap)).collect::<Result<_>>()?;
        Ok(Self { part: common, slices })
    }

    /// `s ↦ u_s·v_s`.
    pub fn mul_process(&self, other: &Self, degree_cap: usize) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let slices = a.slices.iter().zip(&b.slices).map(|(x, y)| x.multiply(y, degree_cap)).collect::<Result<_>>()?;
        Ok(Self { part: a.part, slices })
    }

    /// `s ↦ u_s·1_A(s)`.
    pub fn restrict_time(&self, set: &CellSet) -> Result<Self> {
        let set = if set.partition() == &self.part { set.clone() } else { set.lift(&self.part)? };
        let slices = self
            .slices
            .iter()
            .enumerate()
            .map(|(k, s)| if set.contains(k) { s.clone() } else { ChaosExpansion::zero(&self.part) })
            .collect();
        Ok(Self { part: self.part.clone(), slices })
    }

    /// `s ↦ E(u_s | 𝔽_A)·1_A(s)`.
    pub fn condition(&self, set: &CellSet) -> Result<Self> {
        let set = if set.partition() == &self.part { set.clone() } else { set.lift(&self.part)? };
        let slices = self
            .slices
            .iter()
            .enumerate()
            .map(|(k, s)| if set.contains(k) { s.condition(&set) } else { Ok(ChaosExpansion::zero(&self.part)) })
            .collect::<Result<_>>()?;
        Ok(Self { part: self.part.clone(), slices })
    }

    /// Skorohod integral `δ(u) = Σ_n I_{n+1}(f̃_n)`: the time slot is merged
    /// into the kernel and everything is symmetrized.
    pub fn skorohod(&self) -> ChaosExpansion {
        let top = self.max_degree().map_or(0, |d| d + 2);
        let mut maps: Vec<BTreeMap<Index, f64>> = vec![BTreeMap::new(); top];
        for (j, slice) in self.slices.iter().enumerate() {
            let j = j as u16;
            for (n, k) in slice.kernels().iter().enumerate() {
                for (a, v) in k.entries() {
                    let pos = a.partition_point(|&c| c <= j);
                    let mut full = Vec::with_capacity(n + 1);
                    full.extend_from_slice(&a[..pos]);
                    full.push(j);
                    full.extend_from_slice(&a[pos..]);
                    let mj = full.iter().filter(|&&c| c == j).count();
                    *maps[n + 1].entry(full).or_insert(0.0) += mj as f64 / (n + 1) as f64 * v;
                }
            }
        }
        let kernels = maps.into_iter().enumerate().map(|(d, m)| SymKernel::from_map(d, &self.part, m)).collect();
        ChaosExpansion::from_kernels(&self.part, kernels).expect("degrees are consistent")
    }

    /// `X_t = δ(u·1_{[0,t]})` for a grid point `t`.
    pub fn indefinite_skorohod(&self, t: f64) -> Result<ChaosExpansion> {
        let set = CellSet::interval(&self.part, 0.0, t)?;
        Ok(self.restrict_time(&set)?.skorohod())
    }

    /// `D_r u_s`: entry `s` is the process `r ↦ D_r u_s`.
    pub fn mderivative(&self) -> Vec<ProcessExpansion> {
        self.slices.iter().map(ChaosExpansion::mderivative).collect()
    }

    /// `E ∫ u_s v_s ds`.
    pub fn l2_inner(&self, other: &Self) -> Result<f64> {
        let (a, b) = self.aligned(other)?;
        let mut s = 0.0;
        for (k, (x, y)) in a.slices.iter().zip(&b.slices).enumerate() {
            s += a.part.len(k) * x.l2_inner(y)?;
        }
        Ok(s)
    }

    /// `‖u‖²_{k,2} = Σ_cells λ_j·‖u_j‖²_{k,2}`; for `k = 1` this is
    /// `E∫u² ds + E∫∫(D_r u_s)² dr ds`.
    pub fn seminorm_sq(&self, k: usize) -> f64 {
        self.slices.iter().enumerate().map(|(j, s)| self.part.len(j) * s.seminorm_sq(k)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().fold(0.0, |m, s| m.max(s.max_abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i1(h: &[f64], part: &Partition) -> ChaosExpansion {
        ChaosExpansion::from_kernel(SymKernel::from_cell_values(h, part).unwrap())
    }

    #[test]
    fn skorohod_of_deterministic_is_first_chaos() {
        let p = Partition::uniform(3).unwrap();
        let u = ProcessExpansion::deterministic(&[1.0, -2.0, 0.5], &p).unwrap();
        assert_eq!(u.skorohod(), i1(&[1.0, -2.0, 0.5], &p));
    }

    #[test]
    fn skorohod_of_constant_first_chaos() {
        let p = Partition::uniform(1).unwrap();
        let u = ProcessExpansion::constant_in_time(&i1(&[1.0], &p));
        let want = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0], 2, &p).unwrap());
        assert_eq!(u.skorohod(), want);
        // on a finer grid too
        let p4 = Partition::uniform(4).unwrap();
        let u = ProcessExpansion::constant_in_time(&i1(&[1.0; 4], &p4));
        let want = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0; 4], 2, &p4).unwrap());
        assert!(u.skorohod().max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn indefinite_skorohod_examples() {
        let p = Partition::uniform(4).unwrap();
        let one = ProcessExpansion::deterministic(&[1.0; 4], &p).unwrap();
        assert_eq!(one.indefinite_skorohod(0.5).unwrap(), i1(&[1.0, 1.0, 0.0, 0.0], &p));
        assert!(one.indefinite_skorohod(0.0).unwrap().is_zero());
        assert!(one.indefinite_skorohod(0.3).is_err());
        // u_s = Ñ₁: X_t = Ñ₁Ñ_t − Ñ_t − t
        let n1 = i1(&[1.0; 4], &p);
        let u = ProcessExpansion::constant_in_time(&n1);
        let nt = i1(&[1.0, 1.0, 0.0, 0.0], &p);
        let want = n1
            .multiply(&nt, 8)
            .unwrap()
            .sub(&nt)
            .unwrap()
            .sub(&ChaosExpansion::constant(0.5, &p))
            .unwrap();
        assert!(u.indefinite_skorohod(0.5).unwrap().max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn condition_process_masks_time() {
        let p = Partition::uniform(2).unwrap();
        let u = ProcessExpansion::constant_in_time(&i1(&[1.0, 1.0], &p));
        let a = CellSet::from_cells(&p, [0]).unwrap();
        let c = u.condition(&a).unwrap();
        assert_eq!(c.slice(0), &i1(&[1.0, 0.0], &p));
        assert!(c.slice(1).is_zero());
    }

    #[test]
    fn lift_repeats_slices() {
        let p = Partition::uniform(2).unwrap();
        let u = ProcessExpansion::deterministic(&[1.0, 2.0], &p).unwrap();
        let l = u.lift(&Partition::uniform(4).unwrap()).unwrap();
        let vals: Vec<f64> = l.slices().iter().map(ChaosExpansion::expectation).collect();
        assert_eq!(vals, vec![1.0, 1.0, 2.0, 2.0]);
        assert!((l.seminorm_sq(1) - u.seminorm_sq(1)).abs() < 1e-15);
    }

    #[test]
    fn process_seminorm_and_meyer_equality_case() {
        let p = Partition::uniform(1).unwrap();
        let u = ProcessExpansion::constant_in_time(&i1(&[1.0], &p));
        assert!((u.seminorm_sq(1) - 2.0).abs() < 1e-15);
        assert!((u.skorohod().second_moment() - 2.0).abs() < 1e-15);
    }
}
