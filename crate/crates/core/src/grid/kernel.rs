use std::collections::BTreeMap;

use super::{CellSet, Partition};
use crate::{ChaosError, Result};

/// Canonical (nondecreasing) multi-index of cell ids.
pub(crate) type Index = Vec<u16>;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Runs `(cell, multiplicity)` of a sorted multi-index.
pub(crate) fn runs(idx: &[u16]) -> impl Iterator<Item = (u16, usize)> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        let c = *idx.get(i)?;
        let start = i;
        while i < idx.len() && idx[i] == c {
            i += 1;
        }
        Some((c, i - start))
    })
}

/// Number of distinct orderings of a multi-index, `n! / Π m_j!`.
pub fn multiplicity(idx: &[u16]) -> f64 {
    runs(idx).fold(factorial(idx.len()), |acc, (_, m)| acc / factorial(m))
}

pub(crate) fn cell_measure(idx: &[u16], part: &Partition) -> f64 {
    idx.iter().map(|&c| part.len(c as usize)).product()
}

/// All distinct sub-multisets of size `k`, each paired with its complement.
pub(crate) fn submultisets(idx: &[u16], k: usize) -> Vec<(Index, Index)> {
    let rs: Vec<(u16, usize)> = runs(idx).collect();
    let mut out = Vec::new();
    let mut take = vec![0usize; rs.len()];
    fn rec(rs: &[(u16, usize)], pos: usize, left: usize, take: &mut [usize], out: &mut Vec<(Index, Index)>) {
        if pos == rs.len() {
            if left == 0 {
                let mut chosen = Vec::new();
                let mut rest = Vec::new();
                for (&(c, m), &t) in rs.iter().zip(take.iter()) {
                    chosen.extend(std::iter::repeat_n(c, t));
                    rest.extend(std::iter::repeat_n(c, m - t));
                }
                out.push((chosen, rest));
            }
            return;
        }
        let remaining: usize = rs[pos..].iter().map(|r| r.1).sum();
        if remaining < left {
            return;
        }
        for t in 0..=rs[pos].1.min(left) {
            take[pos] = t;
            rec(rs, pos + 1, left - t, take, out);
        }
        take[pos] = 0;
    }
    rec(&rs, 0, k, &mut take, &mut out);
    out
}

/// Sorted union of multi-indices.
pub(crate) fn merge(parts: &[&[u16]]) -> Index {
    let mut v: Index = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_unstable();
    v
}

/// A symmetric kernel of degree `n`, constant on products of grid cells.
///
/// Only canonical (sorted) multi-indices are stored; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymKernel {
    degree: usize,
    part: Partition,
    values: BTreeMap<Index, f64>,
}

impl SymKernel {
    pub fn zero(degree: usize, part: &Partition) -> Self {
        Self { degree, part: part.clone(), values: BTreeMap::new() }
    }

    /// Degree-0 kernel holding the constant `c`.
    pub fn scalar(c: f64, part: &Partition) -> Self {
        let mut k = Self::zero(0, part);
        if c != 0.0 {
            k.values.insert(Vec::new(), c);
        }
        k
    }

    pub(crate) fn from_map(degree: usize, part: &Partition, mut values: BTreeMap<Index, f64>) -> Self {
        values.retain(|_, v| *v != 0.0);
        Self { degree, part: part.clone(), values }
    }

    /// Symmetrize a kernel given on arbitrary-order multi-indices: the value at
    /// a canonical index is the average of the raw values over all orderings
    /// of it (absent orderings count as zero).
    pub fn symmetrize<I>(raw: I, degree: usize, part: &Partition) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut sums: BTreeMap<Index, f64> = BTreeMap::new();
        for (idx, v) in raw {
            if idx.len() != degree {
                return Err(ChaosError::DegreeMismatch { expected: degree, got: idx.len() });
            }
            let mut canon = Index::with_capacity(degree);
            for &c in &idx {
                if c >= part.cells() {
                    return Err(ChaosError::CellOutOfRange { cell: c, cells: part.cells() });
                }
                canon.push(c as u16);
            }
            canon.sort_unstable();
            *sums.entry(canon).or_insert(0.0) += v;
        }
        for (k, v) in sums.iter_mut() {
            *v /= multiplicity(k);
        }
        Ok(Self::from_map(degree, part, sums))
    }

    /// `h^{⊗n}` for a per-cell function `h`; `n = 0` gives the constant 1.
    pub fn tensor_power(h: &[f64], n: usize, part: &Partition) -> Result<Self> {
        if h.len() != part.cells() {
            return Err(ChaosError::PartitionMismatch);
        }
        let support: Vec<u16> = (0..h.len()).filter(|&i| h[i] != 0.0).map(|i| i as u16).collect();
        let mut values = BTreeMap::new();
        let mut pos = vec![0usize; n];
        if n == 0 {
            values.insert(Vec::new(), 1.0);
        } else if !support.is_empty() {
            // nondecreasing position vectors into `support`
            loop {
                let idx: Index = pos.iter().map(|&p| support[p]).collect();
                let v = idx.iter().map(|&c| h[c as usize]).product();
                values.insert(idx, v);
                let mut j = n;
                loop {
                    if j == 0 {
                        return Ok(Self::from_map(n, part, values));
                    }
                    j -= 1;
                    if pos[j] + 1 < support.len() {
                        let next = pos[j] + 1;
                        pos[j..].iter_mut().for_each(|p| *p = next);
                        break;
                    }
                }
            }
        }
        Ok(Self::from_map(n, part, values))
    }

    /// Degree-1 kernel with the given per-cell values.
    pub fn from_cell_values(h: &[f64], part: &Partition) -> Result<Self> {
        Self::tensor_power(h, 1, part)
    }

    /// Degree-1 indicator `1_A`.
    pub fn indicator(set: &CellSet) -> Self {
        let h: Vec<f64> = set.mask().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Self::tensor_power(&h, 1, set.partition()).expect("mask matches partition")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    /// Number of stored (nonzero) canonical entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at any (not necessarily sorted) multi-index.
    pub fn get(&self, idx: &[usize]) -> f64 {
        let mut canon: Index = idx.iter().map(|&c| c as u16).collect();
        canon.sort_unstable();
        self.values.get(&canon).copied().unwrap_or(0.0)
    }

    /// Canonical entries in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[u16], f64)> {
        self.values.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub(crate) fn values(&self) -> &BTreeMap<Index, f64> {
        &self.values
    }

    /// The constant of a degree-0 kernel.
    pub fn scalar_value(&self) -> f64 {
        self.values.get(&Vec::new()).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        let values = self.values.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Self::from_map(self.degree, &self.part, values)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.part != other.part {
            return Err(ChaosError::PartitionMismatch);
        }
        if self.degree != other.degree {
            return Err(ChaosError::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            *values.entry(k.clone()).or_insert(0.0) += c * v;
        }
        Ok(Self::from_map(self.degree, &self.part, values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    /// `⟨f, g⟩_{L²(Tⁿ)}`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let (small, big) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        Ok(small
            .values
            .iter()
            .filter_map(|(k, v)| big.values.get(k).map(|w| multiplicity(k) * v * w * cell_measure(k, &self.part)))
            .sum())
    }

    /// `‖f‖²_n`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|(k, v)| multiplicity(k) * v * v * cell_measure(k, &self.part)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.axpy(-1.0, other)?.max_abs())
    }

    /// Zero every entry touching a cell outside `set` (multiplication by `1_A^{⊗n}`).
    pub fn restrict(&self, set: &CellSet) -> Result<Self> {
        if set.partition() != &self.part {
            return Err(ChaosError::PartitionMismatch);
        }
        let values = self
            .values
            .iter()
            .filter(|(k, _)| k.iter().all(|&c| set.contains(c as usize)))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        Ok(Self::from_map(self.degree, &self.part, values))
    }

    /// The same function expressed on a finer partition.
    pub fn lift(&self, finer: &Partition) -> Result<Self> {
        if finer == &self.part {
            return Ok(self.clone());
        }
        let children = self.part.children_in(finer)?;
        let mut values = BTreeMap::new();
        for (idx, &v) in &self.values {
            let rs: Vec<(u16, usize)> = runs(idx).collect();
            let mut acc: Vec<Index> = vec![Vec::new()];
            for (c, m) in rs {
                let ch = children[c as usize].clone();
                let kids: Vec<u16> = ch.map(|i| i as u16).collect();
                let choices = multichoose(&kids, m);
                acc = acc
                    .iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |ch| {
                            let mut p = prefix.clone();
                            p.extend_from_slice(ch);
                            p
                        })
                    })
                    .collect();
            }
            for k in acc {
                values.insert(k, v);
            }
        }
        Ok(Self::from_map(self.degree, finer, values))
    }

    /// Contraction `f ★_r^l g` on the grid: `r` variable pairs identified, `l`
    /// of them integrated out; the result is symmetrized.
    pub fn contract(&self, other: &Self, r: usize, l: usize) -> Result<Self> {
        super::contract::contract(self, other, r, l)
    }

    /// Symmetrized tensor product `sym(f ⊗ g)`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.contract(other, 0, 0)
    }
}

/// Nondecreasing sequences of length `m` drawn from sorted `items`.
fn multichoose(items: &[u16], m: usize) -> Vec<Index> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &c) in items.iter().enumerate() {
        for mut tail in multichoose(&items[i..], m - 1) {
            tail.insert(0, c);
            out.push(tail);
        }
    }
    out
}
