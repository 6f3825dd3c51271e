//! Finite chaos expansions `F = c₀ + Σ_n I_n(f_n)` and time-indexed processes
//! built from them, with the Malliavin derivative, the Skorohod integral,
//! conditioning and exact multiplication.

mod process;
mod product;

use std::borrow::Cow;
use std::collections::BTreeMap;

pub use process::ProcessExpansion;

use crate::grid::kernel_internals::{factorial, runs};
use crate::grid::{CellSet, Partition, SymKernel};
use crate::{ChaosError, Result};

/// Default bound on the chaos degree of products.
pub const DEFAULT_DEGREE_CAP: usize = 8;

/// A finite chaos expansion on a grid. `kernels[n]` has degree `n`; trailing
/// zero kernels are trimmed, so the zero variable has no kernels at all.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosExpansion {
    part: Partition,
    kernels: Vec<SymKernel>,
}

impl ChaosExpansion {
    pub fn zero(part: &Partition) -> Self {
        Self { part: part.clone(), kernels: Vec::new() }
    }

    pub fn constant(c: f64, part: &Partition) -> Self {
        Self::from_kernel(SymKernel::scalar(c, part))
    }

    /// The multiple integral `I_n(f)`.
    pub fn from_kernel(f: SymKernel) -> Self {
        let part = f.partition().clone();
        let n = f.degree();
        let mut kernels: Vec<SymKernel> = (0..n).map(|d| SymKernel::zero(d, &part)).collect();
        kernels.push(f);
        Self::trimmed(part, kernels)
    }

    /// Assemble from one kernel per degree (`kernels[n]` of degree `n`).
    pub fn from_kernels(part: &Partition, kernels: Vec<SymKernel>) -> Result<Self> {
        for (n, k) in kernels.iter().enumerate() {
            if k.degree() != n {
                return Err(ChaosError::DegreeMismatch { expected: n, got: k.degree() });
            }
            if k.partition() != part {
                return Err(ChaosError::PartitionMismatch);
            }
        }
        Ok(Self::trimmed(part.clone(), kernels))
    }

    fn trimmed(part: Partition, mut kernels: Vec<SymKernel>) -> Self {
        while kernels.last().is_some_and(SymKernel::is_zero) {
            kernels.pop();
        }
        Self { part, kernels }
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn kernels(&self) -> &[SymKernel] {
        &self.kernels
    }

    /// Kernel of degree `n`, if the expansion reaches that degree.
    pub fn kernel(&self, n: usize) -> Option<&SymKernel> {
        self.kernels.get(n)
    }

    /// Highest degree with a nonzero kernel; `None` for the zero variable.
    pub fn max_degree(&self) -> Option<usize> {
        self.kernels.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.kernels.is_empty()
    }

    /// `E(F) = c₀`.
    pub fn expectation(&self) -> f64 {
        self.kernels.first().map_or(0.0, SymKernel::scalar_value)
    }

    /// `E(F²) = Σ_n n!‖f_n‖²` by the isometry.
    pub fn second_moment(&self) -> f64 {
        self.kernels.iter().enumerate().fold(0.0, |acc, (n, k)| acc + factorial(n) * k.norm_sq())
    }

    pub fn variance(&self) -> f64 {
        self.kernels.iter().enumerate().skip(1).fold(0.0, |acc, (n, k)| acc + factorial(n) * k.norm_sq())
    }

    /// `E(FG)` by the isometry.
    pub fn l2_inner(&self, other: &Self) -> Result<f64> {
        let (a, b) = Self::aligned(self, other)?;
        let mut s = 0.0;
        for (n, (f, g)) in a.kernels.iter().zip(&b.kernels).enumerate() {
            s += factorial(n) * f.inner(g)?;
        }
        Ok(s)
    }

    /// The same variable on a finer partition.
    pub fn lift(&self, finer: &Partition) -> Result<Self> {
        if finer == &self.part {
            return Ok(self.clone());
        }
        let kernels = self.kernels.iter().map(|k| k.lift(finer)).collect::<Result<_>>()?;
        Ok(Self::trimmed(finer.clone(), kernels))
    }

    /// Both operands on their common refinement.
    pub(crate) fn aligned<'a>(a: &'a Self, b: &'a Self) -> Result<(Cow<'a, Self>, Cow<'a, Self>)> {
        if a.part == b.part {
            return Ok((Cow::Borrowed(a), Cow::Borrowed(b)));
        }
        let common = a.part.common_refinement(&b.part);
        if !a.part.is_refined_by(&common) || !b.part.is_refined_by(&common) {
            return Err(ChaosError::PartitionMismatch);
        }
        Ok((Cow::Owned(a.lift(&common)?), Cow::Owned(b.lift(&common)?)))
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        let (a, b) = Self::aligned(self, other)?;
        let n = a.kernels.len().max(b.kernels.len());
        let part = a.part.clone();
        let kernels = (0..n)
            .map(|d| {
                let zero = SymKernel::zero(d, &part);
                let x = a.kernels.get(d).unwrap_or(&zero);
                match b.kernels.get(d) {
                    Some(y) => x.axpy(c, y),
                    None => Ok(x.clone()),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self::trimmed(part, kernels))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::trimmed(self.part.clone(), self.kernels.iter().map(|k| k.scale(c)).collect())
    }

    /// `Σ_i coeffs[i]·terms[i]`, lifting to a common grid as needed.
    pub fn linear_combine(coeffs: &[f64], terms: &[Self]) -> Result<Self> {
        if coeffs.len() != terms.len() {
            return Err(ChaosError::DegreeMismatch { expected: coeffs.len(), got: terms.len() });
        }
        let Some(first) = terms.first() else {
            return Err(ChaosError::DegenerateInstance("empty linear combination".into()));
        };
        let mut acc = Self::zero(&first.part);
        for (c, t) in coeffs.iter().zip(terms) {
            acc = acc.axpy(*c, t)?;
        }
        Ok(acc)
    }

    /// `E(F | 𝔽_A)`: zero every kernel entry touching a cell outside `A`.
    pub fn condition(&self, set: &CellSet) -> Result<Self> {
        let set = self.set_on_grid(set)?;
        let kernels = self.kernels.iter().map(|k| k.restrict(&set)).collect::<Result<_>>()?;
        Ok(Self::trimmed(self.part.clone(), kernels))
    }

    pub(crate) fn set_on_grid<'a>(&self, set: &'a CellSet) -> Result<Cow<'a, CellSet>> {
        if set.partition() == &self.part {
            Ok(Cow::Borrowed(set))
        } else {
            Ok(Cow::Owned(set.lift(&self.part)?))
        }
    }

    /// Malliavin derivative `D_t F = Σ_n n·I_{n−1}(f_n(·, t))`, one slice per time cell.
    pub fn mderivative(&self) -> ProcessExpansion {
        let cells = self.part.cells();
        let top = self.kernels.len().saturating_sub(1);
        let mut slices: Vec<Vec<BTreeMap<Vec<u16>, f64>>> = vec![vec![BTreeMap::new(); top]; cells];
        for (n, k) in self.kernels.iter().enumerate().skip(1) {
            for (b, v) in k.entries() {
                for (j, _) in runs(b) {
                    let pos = b.iter().position(|&c| c == j).expect("cell present");
                    let mut rest = b.to_vec();
                    rest.remove(pos);
                    *slices[j as usize][n - 1].entry(rest).or_insert(0.0) += n as f64 * v;
                }
            }
        }
        let part = self.part.clone();
        let slices = slices
            .into_iter()
            .map(|maps| {
                let kernels = maps.into_iter().enumerate().map(|(d, m)| SymKernel::from_map(d, &part, m)).collect();
                Self::trimmed(part.clone(), kernels)
            })
            .collect();
        ProcessExpansion::from_slices_unchecked(part, slices)
    }

    /// `‖F‖²_{k,2} = E F² + Σ_{l=1}^{k} E‖D^l F‖²`, exact.
    pub fn seminorm_sq(&self, k: usize) -> f64 {
        self.kernels
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let falling: f64 = (0..=k.min(n)).map(|l| factorial(n) / factorial(n - l)).sum();
                factorial(n) * f.norm_sq() * falling
            })
            .sum()
    }

    /// Largest absolute kernel entry.
    pub fn max_abs(&self) -> f64 {
        self.kernels.iter().fold(0.0, |m, k| m.max(k.max_abs()))
    }

    /// Largest absolute kernel-entry difference (after lifting to a common grid).
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Kernel residual relative to the larger operand: `max|f−g| / max(1, max|f|, max|g|)`.
    pub fn relative_residual(&self, other: &Self) -> Result<f64> {
        let scale = 1f64.max(self.max_abs()).max(other.max_abs());
        Ok(self.max_abs_diff(other)? / scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2() -> Partition {
        Partition::uniform(2).unwrap()
    }

    fn i1(h: &[f64], part: &Partition) -> ChaosExpansion {
        ChaosExpansion::from_kernel(SymKernel::from_cell_values(h, part).unwrap())
    }

    #[test]
    fn expectation_examples() {
        let p = grid2();
        assert_eq!(ChaosExpansion::constant(3.0, &p).expectation(), 3.0);
        let b2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 0.0], 2, &p).unwrap());
        assert_eq!(b2.expectation(), 0.0);
        let f = ChaosExpansion::constant(3.0, &p)
            .add(&i1(&[1.0, 1.0], &p))
            .unwrap()
            .add(&ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 1.0], 2, &p).unwrap()))
            .unwrap();
        assert_eq!(f.expectation(), 3.0);
        assert_eq!(f.max_degree(), Some(2));
    }

    #[test]
    fn linear_combination_examples() {
        let p = grid2();
        let f = i1(&[1.0, -2.0], &p);
        assert!(ChaosExpansion::linear_combine(&[1.0, -1.0], &[f.clone(), f.clone()]).unwrap().is_zero());
        let two = ChaosExpansion::linear_combine(&[2.0], &[ChaosExpansion::constant(1.0, &p)]).unwrap();
        assert_eq!(two, ChaosExpansion::constant(2.0, &p));
        let g = i1(&[0.5, 0.5], &p);
        assert_eq!(f.add(&g).unwrap(), i1(&[1.5, -1.5], &p));
    }

    #[test]
    fn derivative_examples() {
        let p = grid2();
        let d = i1(&[2.0, -1.0], &p).mderivative();
        assert_eq!(d.slice(0), &ChaosExpansion::constant(2.0, &p));
        assert_eq!(d.slice(1), &ChaosExpansion::constant(-1.0, &p));
        let b2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 0.0], 2, &p).unwrap());
        let d = b2.mderivative();
        assert_eq!(d.slice(0), &i1(&[2.0, 0.0], &p));
        assert!(d.slice(1).is_zero());
        assert!(ChaosExpansion::constant(4.0, &p).mderivative().slices().iter().all(ChaosExpansion::is_zero));
    }

    #[test]
    fn conditioning_examples() {
        let p = grid2();
        let first = CellSet::from_cells(&p, [0]).unwrap();
        assert_eq!(i1(&[1.0, 1.0], &p).condition(&first).unwrap(), i1(&[1.0, 0.0], &p));
        let full2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 1.0], 2, &p).unwrap());
        let half2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 0.0], 2, &p).unwrap());
        assert_eq!(full2.condition(&first).unwrap(), half2);
        assert_eq!(full2.condition(&CellSet::full(&p)).unwrap(), full2);
        // a set on a coarser grid is lifted
        let fine = Partition::uniform(4).unwrap();
        let f = i1(&[1.0; 4], &fine);
        assert_eq!(f.condition(&first).unwrap(), i1(&[1.0, 1.0, 0.0, 0.0], &fine));
    }

    #[test]
    fn seminorm_examples() {
        let p = grid2();
        assert!((i1(&[1.0, 1.0], &p).seminorm_sq(1) - 2.0).abs() < 1e-15);
        assert_eq!(ChaosExpansion::constant(3.0, &p).seminorm_sq(2), 9.0);
    }

    #[test]
    fn seminorm_matches_iterated_derivative() {
        let p = Partition::new(vec![0.0, 0.2, 0.7, 1.0]).unwrap();
        let f = ChaosExpansion::from_kernels(
            &p,
            vec![
                SymKernel::scalar(0.5, &p),
                SymKernel::from_cell_values(&[1.0, -1.0, 2.0], &p).unwrap(),
                SymKernel::tensor_power(&[0.3, 1.0, -0.7], 2, &p).unwrap(),
                SymKernel::tensor_power(&[1.0, 0.5, 0.2], 3, &p).unwrap(),
            ],
        )
        .unwrap();
        let lam = p.lengths();
        let d = f.mderivative();
        let d1: f64 = (0..3).map(|j| lam[j] * d.slice(j).second_moment()).sum();
        let d2: f64 = (0..3)
            .map(|j| {
                let dd = d.slice(j).mderivative();
                (0..3).map(|k| lam[j] * lam[k] * dd.slice(k).second_moment()).sum::<f64>()
            })
            .sum();
        let want1 = f.second_moment() + d1;
        assert!((f.seminorm_sq(1) - want1).abs() < 1e-12 * want1);
        assert!((f.seminorm_sq(2) - want1 - d2).abs() < 1e-12 * (want1 + d2));
    }
}
