use std::collections::BTreeMap;

use super::kernel::{cell_measure, merge, multiplicity, submultisets, Index, SymKernel};
use crate::{ChaosError, Result};

/// Exact `f ★_r^l g` over multiset decompositions.
///
/// Each entry `b` of `f` is split as `U ⊎ G ⊎ T` (sizes `l`, `r-l`, rest) and each
/// entry `c` of `g` as `U ⊎ G ⊎ S`; pairs sharing `(U, G)` contribute to the
/// output index `G ⊎ T ⊎ S` with weight
/// `mult(U)·λ(U)·mult(G)·mult(T)·mult(S) / mult(G ⊎ T ⊎ S)`.
pub(super) fn contract(f: &SymKernel, g: &SymKernel, r: usize, l: usize) -> Result<SymKernel> {
    let (m, n) = (f.degree(), g.degree());
    if r > m.min(n) || l > r {
        return Err(ChaosError::ContractionOrder { r, l, m, n });
    }
    if f.partition() != g.partition() {
        return Err(ChaosError::PartitionMismatch);
    }
    let part = f.partition();
    let mut left: BTreeMap<(Index, Index), Vec<(Index, f64)>> = BTreeMap::new();
    for (b, &fb) in f.values() {
        for (u, rest) in submultisets(b, l) {
            let wu = multiplicity(&u) * cell_measure(&u, part);
            for (gm, t) in submultisets(&rest, r - l) {
                let w = fb * wu * multiplicity(&gm) * multiplicity(&t);
                left.entry((u.clone(), gm)).or_default().push((t, w));
            }
        }
    }
    let mut out: BTreeMap<Index, f64> = BTreeMap::new();
    for (c, &gc) in g.values() {
        for (u, rest) in submultisets(c, l) {
            for (gm, s) in submultisets(&rest, r - l) {
                let Some(list) = left.get(&(u.clone(), gm.clone())) else { continue };
                let ws = gc * multiplicity(&s);
                for (t, w) in list {
                    *out.entry(merge(&[&gm, t, &s])).or_insert(0.0) += w * ws;
                }
            }
        }
    }
    for (a, v) in out.iter_mut() {
        *v /= multiplicity(a);
    }
    Ok(SymKernel::from_map(m + n - r - l, part, out))
}
