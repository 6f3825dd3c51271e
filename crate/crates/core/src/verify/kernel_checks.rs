//! Exact both-sides kernel computations on seeded random instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chaos::{ChaosExpansion, ProcessExpansion};
use crate::grid::{CellSet, Partition};
use crate::represent::{
    assemble_forward_backward, clark_ocone, clark_ocone_kernel_route, forward_backward, ito_skorohod_w, pi_approximation,
    predictable_projection,
};
use crate::{ChaosError, Result};

use super::random::{instance_rng, random_cell_set, random_chaos, random_grid_interval, random_partition, random_process};
use super::{CheckConfig, Report, StatKind};

/// Residual tolerance of every exact identity.
pub const EXACT_TOL: f64 = 1e-12;
/// Largest random grid.
pub const MAX_CELLS: usize = 16;

pub const KERNEL_CHECKS: [&str; 10] =
    ["duality", "covariance", "commutation", "ibp", "chain_rule", "r2", "r3", "meyer", "clark_ocone", "prop3_grid"];

/// `max|a−b| / max(1, max|a|, max|b|)` over all slices.
fn process_residual(a: &ProcessExpansion, b: &ProcessExpansion) -> Result<f64> {
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    Ok(a.max_abs_diff(b)? / scale)
}

/// Scalar residual against the natural scale of the two sides.
fn scalar_residual(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(1.0)
}

/// `∫ u_s ds` as a random variable.
fn time_integral(u: &ProcessExpansion) -> Result<ChaosExpansion> {
    let part = u.partition();
    let coeffs = part.lengths();
    ChaosExpansion::linear_combine(&coeffs, u.slices())
}

fn setup(rng: &mut ChaCha8Rng) -> Result<Partition> {
    random_partition(rng, MAX_CELLS)
}

/// `E[F δ(u)] = E⟨DF, u⟩`.
pub fn duality(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let f = random_chaos(rng, &part, 4)?;
    let u = random_process(rng, &part, 3)?;
    let du = u.skorohod();
    let lhs = f.l2_inner(&du)?;
    let rhs = f.mderivative().l2_inner(&u)?;
    Ok(scalar_residual(lhs, rhs, (f.second_moment() * du.second_moment()).sqrt()))
}

/// `E[δ(u)δ(v)] = E∫u v + E∫∫ D_r u_s D_s v_r`.
#[allow(clippy::needless_range_loop)]
pub fn covariance(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let u = random_process(rng, &part, 3)?;
    let v = random_process(rng, &part, 3)?;
    let (su, sv) = (u.skorohod(), v.skorohod());
    let lhs = su.l2_inner(&sv)?;
    let du = u.mderivative();
    let dv = v.mderivative();
    let mut rhs = u.l2_inner(&v)?;
    for s in 0..part.cells() {
        for r in 0..part.cells() {
            rhs += part.len(s) * part.len(r) * du[s].slice(r).l2_inner(dv[r].slice(s))?;
        }
    }
    Ok(scalar_residual(lhs, rhs, (su.second_moment() * sv.second_moment()).sqrt()))
}

/// `D_t δ(u) = u_t + δ(D_t u)`.
pub fn commutation(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let u = random_process(rng, &part, 3)?;
    let lhs = u.skorohod().mderivative();
    let du = u.mderivative();
    let rhs = ProcessExpansion::from_fn(&part, |t| {
        let dtu = ProcessExpansion::from_fn(&part, |r| Ok(du[r].slice(t).clone()))?;
        u.slice(t).add(&dtu.skorohod())
    })?;
    process_residual(&lhs, &rhs)
}

/// `δ(Fu) = Fδ(u) − ⟨DF, u⟩ − δ(DF·u)`.
pub fn ibp(rng: &mut ChaCha8Rng, cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let f = random_chaos(rng, &part, 2)?;
    let u = random_process(rng, &part, 2)?;
    let lhs = u.mul_variable(&f, cap)?.skorohod();
    let df = f.mderivative();
    let df_u = df.mul_process(&u, cap)?;
    let rhs = f.multiply(&u.skorohod(), cap)?.sub(&time_integral(&df_u)?)?.sub(&df_u.skorohod())?;
    lhs.relative_residual(&rhs)
}

/// `D(FG) = F DG + G DF + DF DG`.
pub fn chain_rule(rng: &mut ChaCha8Rng, cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let f = random_chaos(rng, &part, 3)?;
    let g = random_chaos(rng, &part, 3)?;
    let lhs = f.multiply(&g, cap)?.mderivative();
    let (df, dg) = (f.mderivative(), g.mderivative());
    let rhs = dg.mul_variable(&f, cap)?.add(&df.mul_variable(&g, cap)?)?.add(&df.mul_process(&dg, cap)?)?;
    process_residual(&lhs, &rhs)
}

/// `D_t E(F|𝔽_A) = E(D_t F|𝔽_A)·1_A(t)`.
pub fn r2(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let f = random_chaos(rng, &part, 4)?;
    let a = random_cell_set(rng, &part)?;
    let lhs = f.condition(&a)?.mderivative();
    let rhs = f.mderivative().condition(&a)?;
    process_residual(&lhs, &rhs)
}

/// `E(X_t − X_s | 𝔽_{[s,t]^c}) = 0` for `X = ∫u δÑ`.
pub fn r3(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let u = random_process(rng, &part, 3)?;
    let (s, t) = random_grid_interval(rng, &part);
    let inc = u.indefinite_skorohod(t)?.sub(&u.indefinite_skorohod(s)?)?;
    let outside = CellSet::interval(&part, s, t)?.complement();
    Ok(inc.condition(&outside)?.max_abs() / inc.max_abs().max(1.0))
}

/// `E δ(u)² ≤ ‖u‖²_{1,2}`; returns `(violation, slack)` with the violation
/// `max(0, lhs − rhs)/max(1, rhs)` and the relative slack `(rhs − lhs)/rhs`.
pub fn meyer(rng: &mut ChaCha8Rng, _cap: usize) -> Result<(f64, f64)> {
    let part = setup(rng)?;
    let u = random_process(rng, &part, 4)?;
    let lhs = u.skorohod().second_moment();
    let rhs = u.seminorm_sq(1);
    Ok(((lhs - rhs).max(0.0) / rhs.max(1.0), (rhs - lhs) / rhs))
}

/// `G = E(G|𝔽_{[s,t]^c}) + δ(^{(p,t)}(DG)·1_{[s,t]})`, checked both as a
/// reconstruction and against the direct kernel selection.
pub fn clark_ocone_identity(rng: &mut ChaCha8Rng, _cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let g = random_chaos(rng, &part, 4)?;
    let s = rng.random_range(0.02..0.9);
    let t = rng.random_range(s..1.0);
    let co = clark_ocone(&g, s, t)?;
    let recon = co.reconstruct()?.relative_residual(&g)?;
    let route = clark_ocone_kernel_route(&g, s, t)?.relative_residual(&co.stochastic_part()?)?;
    Ok(recon.max(route))
}

/// On the kernel grid: `δ(u·1_{[0,t]})` equals the Skorohod integral of the
/// projected Itô–Skorohod integrand, and the forward–backward sum at `π =`
/// grid equals the projected integral of `w^π`.
pub fn prop3_grid(rng: &mut ChaCha8Rng, cap: usize) -> Result<f64> {
    let part = setup(rng)?;
    let u = random_process(rng, &part, 3)?;
    let t = part.points()[rng.random_range(1..=part.cells())];
    let w = ito_skorohod_w(&u)?;
    let x = u.indefinite_skorohod(t)?;
    let y = predictable_projection(&w, t)?.skorohod();
    let rep = x.relative_residual(&y)?;
    let w_pi = pi_approximation(&w, &part)?;
    let fb = assemble_forward_backward(&forward_backward(&w_pi, &part, t)?, w_pi.partition(), cap)?;
    let direct = predictable_projection(&w_pi, t)?.skorohod();
    Ok(rep.max(fb.relative_residual(&direct)?))
}

/// Run one exact identity over `cfg.instances` seeded instances.
pub fn run_kernel_identity(id: &str, cfg: &CheckConfig) -> Result<Report> {
    let cap = cfg.degree_cap;
    let run = |f: fn(&mut ChaCha8Rng, usize) -> Result<f64>| -> Result<Vec<f64>> {
        (0..cfg.instances as u64).into_par_iter().map(|i| f(&mut instance_rng(cfg.seed, id, i), cap)).collect()
    };
    let values = match id {
        "duality" => run(duality)?,
        "covariance" => run(covariance)?,
        "commutation" => run(commutation)?,
        "ibp" => run(ibp)?,
        "chain_rule" => run(chain_rule)?,
        "r2" => run(r2)?,
        "r3" => run(r3)?,
        "clark_ocone" => run(clark_ocone_identity)?,
        "prop3_grid" => run(prop3_grid)?,
        "meyer" => {
            let pairs: Vec<(f64, f64)> = (0..cfg.instances as u64)
                .into_par_iter()
                .map(|i| meyer(&mut instance_rng(cfg.seed, id, i), cap))
                .collect::<Result<_>>()?;
            let worst = pairs.iter().fold(0.0f64, |m, p| m.max(p.0));
            let slack = pairs.iter().fold(f64::INFINITY, |m, p| m.min(p.1));
            return Ok(Report::new(id, StatKind::ExactResidual, worst, 0.0, EXACT_TOL)
                .with_samples(cfg.instances as u64, cfg.seed)
                .detail("min_relative_slack", slack));
        }
        other => return Err(ChaosError::UnknownCheck(other.to_string())),
    };
    let worst = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    Ok(Report::new(id, StatKind::ExactResidual, worst, 0.0, EXACT_TOL)
        .with_samples(cfg.instances as u64, cfg.seed)
        .detail("mean_residual", mean))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_holds_on_a_few_instances() {
        let cfg = CheckConfig { instances: 4, ..CheckConfig::default() };
        for id in KERNEL_CHECKS {
            let r = run_kernel_identity(id, &cfg).unwrap();
            assert!(r.pass, "{id}: {}", r.value);
        }
    }

    #[test]
    fn identities_detect_a_wrong_side() {
        // dropping the correction term of the commutation relation must show up
        let mut rng = instance_rng(1, "neg", 0);
        let part = setup(&mut rng).unwrap();
        let u = random_process(&mut rng, &part, 2).unwrap();
        let lhs = u.skorohod().mderivative();
        assert!(process_residual(&lhs, &u).unwrap() > 1e-3);
    }
}
