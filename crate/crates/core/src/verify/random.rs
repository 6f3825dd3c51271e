//! Seeded random instances for the exact-identity sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::{CellSet, Partition, SymKernel};
use crate::Result;

/// Number of nonzero raw entries drawn per chaos degree.
pub const ENTRIES_PER_DEGREE: usize = 6;

/// Independent generator for instance `index` of check `check_id`.
pub fn instance_rng(seed: u64, check_id: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a keeps check streams apart without tying them to enumeration order.
    let tag = check_id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    rng.set_stream(index);
    rng
}

/// A partition with between 2 and `max_cells` cells and irregular spacing.
pub fn random_partition(rng: &mut ChaCha8Rng, max_cells: usize) -> Result<Partition> {
    let m = rng.random_range(2..=max_cells.max(2));
    // perturbed uniform grid: cells stay at least a third of 1/m wide
    let pts = (1..m).map(|i| (i as f64 + rng.random_range(-0.33..0.33)) / m as f64);
    Partition::new(std::iter::once(0.0).chain(pts).chain(std::iter::once(1.0)).collect())
}

/// A random sparse symmetric kernel of the given degree.
pub fn random_kernel(rng: &mut ChaCha8Rng, part: &Partition, degree: usize) -> Result<SymKernel> {
    let count = if degree == 0 { 1 } else { ENTRIES_PER_DEGREE };
    let raw: Vec<(Vec<usize>, f64)> = (0..count)
        .map(|_| {
            let idx = (0..degree).map(|_| rng.random_range(0..part.cells())).collect();
            (idx, rng.random_range(-1.0..1.0))
        })
        .collect();
    SymKernel::symmetrize(raw, degree, part)
}

/// `F = Σ_{n ≤ max_degree} I_n(f_n)` with random sparse kernels.
pub fn random_chaos(rng: &mut ChaCha8Rng, part: &Partition, max_degree: usize) -> Result<ChaosExpansion> {
    let kernels = (0..=max_degree).map(|n| random_kernel(rng, part, n)).collect::<Result<_>>()?;
    ChaosExpansion::from_kernels(part, kernels)
}

/// A step process whose slices are independent [`random_chaos`] draws.
pub fn random_process(rng: &mut ChaCha8Rng, part: &Partition, max_degree: usize) -> Result<ProcessExpansion> {
    ProcessExpansion::from_fn(part, |_| random_chaos(rng, part, max_degree))
}

/// A random nonempty, proper-or-full union of cells.
pub fn random_cell_set(rng: &mut ChaCha8Rng, part: &Partition) -> Result<CellSet> {
    let mut mask: Vec<bool> = (0..part.cells()).map(|_| rng.random_bool(0.5)).collect();
    if !mask.iter().any(|&b| b) {
        mask[rng.random_range(0..part.cells())] = true;
    }
    CellSet::from_mask(part, mask)
}

/// Two grid points `a < b` of `part`.
pub fn random_grid_interval(rng: &mut ChaCha8Rng, part: &Partition) -> (f64, f64) {
    let n = part.cells();
    let i = rng.random_range(0..n);
    let j = rng.random_range(i + 1..=n);
    (part.points()[i], part.points()[j])
}
