use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::Result;

/// Grid representative of `w_s = u_s + δ(D_s u_·1_{[0,s]}(·))`.
///
/// On time cell `k` the slice is `W_k = u_k + δ(r ↦ D_{t_k+} u_r·1{cell(r) ≤ k})`,
/// i.e. `s` is pushed to the right end of its cell inside the indicator. For
/// every grid horizon `t` and every `s` in cell `k`, `W_k` and `w_s` have the
/// same conditional expectation given `𝔽_{[s,t]^c}` (the extra piece
/// `(s, t_{k+1}]` is conditioned away), so the projected integrand, and hence
/// the Itô–Skorohod integral, is exact.
pub fn ito_skorohod_w(u: &ProcessExpansion) -> Result<ProcessExpansion> {
    let part = u.partition();
    let du = u.mderivative();
    ProcessExpansion::from_fn(part, |k| {
        let v = ProcessExpansion::from_fn(part, |r| {
            Ok(if r <= k { du[r].slice(k).clone() } else { ChaosExpansion::zero(part) })
        })?;
        u.slice(k).add(&v.skorohod())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Partition, SymKernel};

    fn increment(part: &Partition, upto: usize) -> ChaosExpansion {
        let h: Vec<f64> = (0..part.cells()).map(|i| if i < upto { 1.0 } else { 0.0 }).collect();
        ChaosExpansion::from_kernel(SymKernel::from_cell_values(&h, part).unwrap())
    }

    #[test]
    fn deterministic_fixed_point() {
        let p = Partition::uniform(4).unwrap();
        let u = ProcessExpansion::deterministic(&[1.0, 0.0, -2.0, 3.0], &p).unwrap();
        assert_eq!(ito_skorohod_w(&u).unwrap(), u);
    }

    #[test]
    fn terminal_value_gains_running_increment() {
        let p = Partition::uniform(4).unwrap();
        let u = ProcessExpansion::constant_in_time(&increment(&p, 4));
        let w = ito_skorohod_w(&u).unwrap();
        for k in 0..4 {
            let want = increment(&p, 4).add(&increment(&p, k + 1)).unwrap();
            assert!(w.slice(k).max_abs_diff(&want).unwrap() < 1e-15);
        }
    }

    #[test]
    fn adapted_fixed_point() {
        let p = Partition::uniform(4).unwrap();
        let u = ProcessExpansion::from_fn(&p, |k| Ok(increment(&p, k))).unwrap();
        assert_eq!(ito_skorohod_w(&u).unwrap(), u);
    }
}
