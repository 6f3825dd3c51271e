use std::ops::Range;

use super::charlier::charlier_table;
use super::PoissonPath;
use crate::chaos::ChaosExpansion;
use crate::grid::kernel_internals::{factorial, runs};
use crate::grid::Partition;

/// Per-cell Charlier values `C_m(λ_j, Ñ(cell_j))` for `m ≤ max_degree`.
#[derive(Debug, Clone)]
pub struct CellTable {
    stride: usize,
    rows: Vec<f64>,
}

impl CellTable {
    pub fn new(part: &Partition, path: &PoissonPath, max_degree: usize) -> Self {
        let stride = max_degree + 1;
        let mut rows = vec![0.0; stride * part.cells()];
        for j in 0..part.cells() {
            let (a, b) = (part.left(j), part.left(j) + part.len(j));
            let lam = part.len(j);
            let x = if j == 0 { path.count_to(b) as f64 - lam } else { path.count_in(a, b) as f64 - lam };
            charlier_table(max_degree, lam, x, &mut rows[j * stride..(j + 1) * stride]);
        }
        Self { stride, rows }
    }

    pub fn row(&self, cell: usize) -> &[f64] {
        &self.rows[cell * self.stride..(cell + 1) * self.stride]
    }

    pub fn max_degree(&self) -> usize {
        self.stride - 1
    }
}

/// A chaos expansion flattened for fast repeated pathwise evaluation:
/// `I_n(f) = Σ_a n!·f_a·Π_j C_{m_j}(λ_j, Ñ(cell_j))` over canonical indices `a`
/// with cell multiplicities `m_j`.
#[derive(Debug, Clone)]
pub struct CompiledChaos {
    part: Partition,
    max_degree: usize,
    coefs: Vec<f64>,
    offsets: Vec<u32>,
    cells: Vec<u16>,
    mults: Vec<u8>,
}

impl CompiledChaos {
    pub fn new(f: &ChaosExpansion) -> Self {
        let mut out = Self {
            part: f.partition().clone(),
            max_degree: f.max_degree().unwrap_or(0),
            coefs: Vec::new(),
            offsets: vec![0],
            cells: Vec::new(),
            mults: Vec::new(),
        };
        for (n, k) in f.kernels().iter().enumerate() {
            let nf = factorial(n);
            for (a, v) in k.entries() {
                out.coefs.push(nf * v);
                for (c, m) in runs(a) {
                    out.cells.push(c);
                    out.mults.push(m as u8);
                }
                out.offsets.push(out.cells.len() as u32);
            }
        }
        out
    }

    pub fn partition(&self) -> &Partition {
        &self.part
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn eval(&self, table: &CellTable) -> f64 {
        let mut sum = 0.0;
        for (e, &c) in self.coefs.iter().enumerate() {
            let mut prod = c;
            for i in self.offsets[e] as usize..self.offsets[e + 1] as usize {
                prod *= table.row(self.cells[i] as usize)[self.mults[i] as usize];
            }
            sum += prod;
        }
        sum
    }

    /// Evaluate with cell `partial.0` replaced by the row `partial.1` and
    /// every cell in `excluded` treated as contributing nothing (entries
    /// touching those cells vanish).
    pub fn eval_masked(&self, table: &CellTable, partial: Option<(usize, &[f64])>, excluded: Range<usize>) -> f64 {
        let mut sum = 0.0;
        'entries: for (e, &c) in self.coefs.iter().enumerate() {
            let mut prod = c;
            for i in self.offsets[e] as usize..self.offsets[e + 1] as usize {
                let cell = self.cells[i] as usize;
                let m = self.mults[i] as usize;
                if excluded.contains(&cell) {
                    continue 'entries;
                }
                prod *= match partial {
                    Some((pc, row)) if pc == cell => row[m],
                    _ => table.row(cell)[m],
                };
            }
            sum += prod;
        }
        sum
    }
}

/// Value of `F` on one path.
pub fn eval_chaos(f: &ChaosExpansion, path: &PoissonPath) -> f64 {
    let c = CompiledChaos::new(f);
    c.eval(&CellTable::new(f.partition(), path, c.max_degree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SymKernel;
    use crate::pathsim::sample_path;

    fn path() -> PoissonPath {
        PoissonPath::new(vec![0.3, 0.7]).unwrap()
    }

    #[test]
    fn examples_on_fixed_path() {
        let p = Partition::uniform(2).unwrap();
        let b = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&[1.0, 0.0], &p).unwrap());
        assert!((eval_chaos(&b, &path()) - 0.5).abs() < 1e-15);
        let b2 = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0, 0.0], 2, &p).unwrap());
        assert!((eval_chaos(&b2, &path()) + 0.75).abs() < 1e-15);
        let c = SymKernel::from_cell_values(&[0.0, 1.0], &p).unwrap();
        let mixed = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&[1.0, 0.0], &p).unwrap().tensor(&c).unwrap());
        assert!((eval_chaos(&mixed, &path()) - 0.25).abs() < 1e-15);
        assert_eq!(eval_chaos(&ChaosExpansion::constant(2.5, &p), &path()), 2.5);
    }

    #[test]
    fn jumps_on_cell_boundaries_belong_to_left_cell() {
        let p = Partition::uniform(2).unwrap();
        let path = PoissonPath::new(vec![0.5]).unwrap();
        let first = ChaosExpansion::from_kernel(SymKernel::from_cell_values(&[1.0, 0.0], &p).unwrap());
        assert!((eval_chaos(&first, &path) - 0.5).abs() < 1e-15);
    }

    /// Factorization oracle: reduce products of single-block integrals with
    /// the product formula and compare pathwise.
    #[test]
    fn factorization_matches_product_formula() {
        let p = Partition::new(vec![0.0, 0.2, 0.55, 1.0]).unwrap();
        let block = |cell: usize, m: usize| {
            let mut h = vec![0.0; 3];
            h[cell] = 1.0;
            ChaosExpansion::from_kernel(SymKernel::tensor_power(&h, m, &p).unwrap())
        };
        let cases: &[&[(usize, usize)]] = &[&[(0, 2), (1, 1)], &[(0, 1), (1, 2), (2, 1)], &[(2, 3), (0, 2)], &[(1, 4)]];
        for case in cases {
            let mut prod = ChaosExpansion::constant(1.0, &p);
            let mut blocks = Vec::new();
            for &(c, m) in *case {
                prod = prod.multiply(&block(c, m), 8).unwrap();
                blocks.push(block(c, m));
            }
            // the disjoint product has a single top-degree kernel
            let n: usize = case.iter().map(|x| x.1).sum();
            let top = ChaosExpansion::from_kernel(prod.kernel(n).unwrap().clone());
            assert_eq!(prod.max_degree(), Some(n));
            for s in 0..1000 {
                let path = sample_path(11, s);
                let direct: f64 = blocks.iter().map(|b| eval_chaos(b, &path)).product();
                let via = eval_chaos(&prod, &path);
                assert!((direct - via).abs() <= 1e-10 * (1.0 + direct.abs()), "{case:?}: {direct} vs {via}");
                assert!((eval_chaos(&top, &path) - via).abs() <= 1e-10 * (1.0 + via.abs()));
            }
        }
    }
}
