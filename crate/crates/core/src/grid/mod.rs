//! Partitions of `[0, 1]`, unions of grid cells, and exact algebra on
//! piecewise-constant symmetric kernels.
//!
//! Cell `i` of a partition is the interval `(t_i, t_{i+1}]`; cell 0 also
//! contains the origin, so `1_{[0,t]}` is a union of cells for every grid
//! point `t`.

mod contract;
mod kernel;

use std::ops::Range;
use std::sync::Arc;

pub use kernel::{multiplicity, SymKernel};

pub(crate) mod kernel_internals {
    pub(crate) use super::kernel::{binomial, factorial, runs, Index};
}

use crate::{ChaosError, Result};

/// Tolerance used to identify two time points.
pub const POINT_TOL: f64 = 1e-12;

/// An ordered grid `0 = t₀ < … < t_M = 1`. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Partition {
    points: Arc<[f64]>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(ChaosError::PartitionInvalid("need at least two points".into()));
        }
        if points[0] != 0.0 || points[points.len() - 1] != 1.0 {
            return Err(ChaosError::PartitionInvalid("points must start at 0 and end at 1".into()));
        }
        if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ChaosError::PartitionInvalid("points must be strictly increasing".into()));
        }
        if points.len() - 1 > u16::MAX as usize {
            return Err(ChaosError::PartitionInvalid("too many cells".into()));
        }
        Ok(Self { points: points.into() })
    }

    /// `m` equal cells.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(ChaosError::PartitionInvalid("cell count must be positive".into()));
        }
        let mut pts: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        pts[m] = 1.0;
        Self::new(pts)
    }

    /// The dyadic grid with `2^depth` cells.
    pub fn dyadic(depth: u32) -> Result<Self> {
        if depth > 15 {
            return Err(ChaosError::PartitionInvalid(format!("dyadic depth {depth} too large")));
        }
        Self::uniform(1 << depth)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    /// Length `λ_i` of cell `i`.
    pub fn len(&self, i: usize) -> f64 {
        self.points[i + 1] - self.points[i]
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Left endpoint of cell `i`.
    pub fn left(&self, i: usize) -> f64 {
        self.points[i]
    }

    /// Cell containing `t ∈ [0, 1]` under the left-open convention.
    pub fn cell_of(&self, t: f64) -> usize {
        let below = self.points.partition_point(|&p| p < t);
        below.saturating_sub(1).min(self.cells() - 1)
    }

    /// Index `i` with `t_i = t` (up to [`POINT_TOL`]).
    pub fn point_index(&self, t: f64) -> Option<usize> {
        let i = self.points.partition_point(|&p| p < t - POINT_TOL);
        (i < self.points.len() && (self.points[i] - t).abs() <= POINT_TOL).then_some(i)
    }

    pub fn require_point(&self, t: f64) -> Result<usize> {
        self.point_index(t).ok_or(ChaosError::NotOnGrid(t))
    }

    /// Cells making up `(a, b]` for grid points `a ≤ b`.
    pub fn cell_range(&self, a: f64, b: f64) -> Result<Range<usize>> {
        let i = self.require_point(a)?;
        let j = self.require_point(b)?;
        if i > j {
            return Err(ChaosError::InvalidInterval(format!("({a}, {b}]")));
        }
        Ok(i..j)
    }

    /// Insert extra times in `[0, 1]`; points already present are ignored.
    pub fn refine(&self, extra: &[f64]) -> Result<Self> {
        let mut pts = self.points.to_vec();
        for &t in extra {
            if !(0.0..=1.0).contains(&t) {
                return Err(ChaosError::PartitionInvalid(format!("time {t} outside [0, 1]")));
            }
            pts.push(t);
        }
        Ok(merge_points(pts))
    }

    pub fn common_refinement(&self, other: &Self) -> Self {
        if self == other {
            return self.clone();
        }
        let mut pts = self.points.to_vec();
        pts.extend_from_slice(&other.points);
        merge_points(pts)
    }

    /// True if every point of `self` is a point of `finer`.
    pub fn is_refined_by(&self, finer: &Self) -> bool {
        self.points.iter().all(|&p| finer.point_index(p).is_some())
    }

    /// For each cell of `self`, the range of cells of `finer` covering it.
    pub fn children_in(&self, finer: &Self) -> Result<Vec<Range<usize>>> {
        let idx: Vec<usize> = self
            .points
            .iter()
            .map(|&p| finer.point_index(p).ok_or(ChaosError::NotNested))
            .collect::<Result<_>>()?;
        Ok(idx.windows(2).map(|w| w[0]..w[1]).collect())
    }
}

fn merge_points(mut pts: Vec<f64>) -> Partition {
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(&q) if p - q <= POINT_TOL => {}
            _ => out.push(p),
        }
    }
    // snap the right end to exactly 1
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    Partition { points: out.into() }
}

/// A union of grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSet {
    part: Partition,
    mask: Vec<bool>,
}

impl CellSet {
    pub fn from_mask(part: &Partition, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != part.cells() {
            return Err(ChaosError::PartitionMismatch);
        }
        Ok(Self { part: part.clone(), mask })
    }

    pub fn from_cells(part: &Partition, cells: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; part.cells()];
        for c in cells {
            *mask.get_mut(c).ok_or(ChaosError::CellOutOfRange { cell: c, cells: part.cells() })? = true;
        }
        Ok(Self { part: part.clone(), mask })
    }

    pub fn full(part: &Partition) -> Self {
        Self { part: part.clone(), mask: vec![true; part.cells()] }
    }

    pub fn empty(part: &Partition) -> Self {
        Self { part: part.clone(), mask: vec![false; part.cells()] }
    }

    /// The cells of `(a, b]` for grid points `a ≤ b`.
    pub fn interval(part: &Partition, a: f64, b: f64) -> Result<Self> {
        Self::from_cells(part, part.cell_range(a, b)?)
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.mask[cell]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn complement(&self) -> Self {
        Self { part: self.part.clone(), mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    fn zip(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.part != other.part {
            return Err(ChaosError::PartitionMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { part: self.part.clone(), mask })
    }

    /// Lebesgue measure `λ(A)`.
    pub fn measure(&self) -> f64 {
        (0..self.mask.len()).filter(|&i| self.mask[i]).map(|i| self.part.len(i)).sum()
    }

    /// The same set on a finer partition.
    pub fn lift(&self, finer: &Partition) -> Result<Self> {
        let children = self.part.children_in(finer)?;
        let mut mask = vec![false; finer.cells()];
        for (c, range) in children.into_iter().enumerate() {
            if self.mask[c] {
                mask[range].iter_mut().for_each(|m| *m = true);
            }
        }
        Ok(Self { part: finer.clone(), mask })
    }
}
