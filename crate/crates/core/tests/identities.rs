use chaoslab::chaos::{ChaosExpansion, ProcessExpansion};
use chaoslab::grid::{Partition, SymKernel};
use chaoslab::pathsim::{eval_chaos, PoissonPath};
use chaoslab::verify::catalogue::{block_integral, increment, Instance};
use chaoslab::verify::{self, CheckConfig, FunctionSpec, StatKind};
use chaoslab::ChaosError;

fn grid() -> Partition {
    Partition::uniform(4).unwrap()
}

fn small_cfg() -> CheckConfig {
    CheckConfig { samples: 20_000, instances: 10, ..CheckConfig::default() }
}

#[test]
fn duality_on_second_chaos() {
    let part = grid();
    let f = block_integral(&part, 0.0, 1.0, 2).unwrap();
    let u = ProcessExpansion::constant_in_time(&increment(&part, 0.0, 1.0).unwrap());
    let lhs = f.mderivative().l2_inner(&u).unwrap();
    let rhs = f.l2_inner(&u.skorohod()).unwrap();
    assert!((lhs - 2.0).abs() < 1e-12 && (rhs - 2.0).abs() < 1e-12, "{lhs} {rhs}");
}

#[test]
fn commutation_for_terminal_value() {
    let part = grid();
    let n1 = increment(&part, 0.0, 1.0).unwrap();
    let u = ProcessExpansion::constant_in_time(&n1);
    let d_delta = u.skorohod().mderivative();
    let expected = ProcessExpansion::constant_in_time(&n1.scale(2.0));
    assert!(d_delta.max_abs_diff(&expected).unwrap() < 1e-12);
}

#[test]
fn chain_rule_is_not_a_derivation() {
    let part = grid();
    let nb = increment(&part, 0.0, 0.5).unwrap();
    let d_sq = nb.multiply(&nb, 4).unwrap().mderivative();
    // D_t(F²) = 1_B(t)(2F + 1)
    let inner = nb.scale(2.0).add(&ChaosExpansion::constant(1.0, &part)).unwrap();
    let expected = ProcessExpansion::from_fn(&part, |k| {
        Ok(if part.left(k) < 0.5 { inner.clone() } else { ChaosExpansion::zero(&part) })
    })
    .unwrap();
    assert!(d_sq.max_abs_diff(&expected).unwrap() < 1e-12);
}

#[test]
fn product_formula_matches_paths() {
    let part = grid();
    let a = increment(&part, 0.0, 0.5).unwrap();
    let b = block_integral(&part, 0.25, 1.0, 2).unwrap();
    let ab = a.multiply(&b, 4).unwrap();
    for jumps in [vec![], vec![0.3, 0.7], vec![0.1, 0.3, 0.6, 0.9], vec![0.26, 0.27, 0.8]] {
        let path = PoissonPath::new(jumps).unwrap();
        let lhs = eval_chaos(&ab, &path);
        let rhs = eval_chaos(&a, &path) * eval_chaos(&b, &path);
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }
}

#[test]
fn product_beyond_cap_is_an_error() {
    let part = grid();
    let f = ChaosExpansion::from_kernel(SymKernel::tensor_power(&[1.0; 4], 3, &part).unwrap());
    assert!(matches!(f.multiply(&f, 5), Err(ChaosError::DegreeCapExceeded { .. })));
}

#[test]
fn linear_function_has_zero_residual_in_both_variants() {
    let cfg = small_cfg();
    let part = verify::catalogue::catalogue_grid(cfg.grid_cells).unwrap();
    let w = Instance::Mixed.build(&part).unwrap();
    let r = verify::run_ito_formula(&FunctionSpec::linear(), &w, 1.0, &cfg).unwrap();
    assert!(r.detail_value("residual_qv_max").unwrap() < 1e-12);
    assert!(r.detail_value("residual_literal_max").unwrap() < 1e-12);
}

#[test]
fn cube_with_unit_integrand() {
    let cfg = small_cfg();
    let part = verify::catalogue::catalogue_grid(cfg.grid_cells).unwrap();
    let w = Instance::Deterministic.build(&part).unwrap();
    let r = verify::run_ito_formula(&FunctionSpec::cube(), &w, 1.0, &cfg).unwrap();
    assert!(r.pass);
    assert!(r.detail_value("residual_qv_max").unwrap() <= 1e-10);
    assert!(r.detail_value("literal_plus_disputed_max").unwrap() <= 1e-9);
}

#[test]
fn unit_backward_factor_reduces_to_ito_formula() {
    let cfg = small_cfg();
    let part = verify::catalogue::catalogue_grid(cfg.grid_cells).unwrap();
    let n1 = increment(&part, 0.0, 1.0).unwrap();
    let one = ChaosExpansion::constant(1.0, &part);
    let f = FunctionSpec::square();
    let p5 = verify::run_prop5(&n1, &one, &f, 1.0, &cfg).unwrap();
    let w = Instance::Deterministic.build(&part).unwrap();
    let ito = verify::run_ito_formula(&f, &w, 1.0, &cfg).unwrap();
    assert!(p5.pass && ito.pass);
    for name in ["residual_qv_max", "disputed_term_mean_abs", "disputed_term_max_abs"] {
        let (a, b) = (p5.detail_value(name).unwrap(), ito.detail_value(name).unwrap());
        assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b}");
    }
    // ½∫₀¹ f''·1² ds = 1 on every path
    assert!((ito.detail_value("disputed_term_mean_abs").unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn burkholder_rejects_zero_integrand() {
    let part = grid();
    let w = ProcessExpansion::zero(&part);
    assert!(matches!(verify::run_burkholder(2.0, &w, &small_cfg()), Err(ChaosError::DegenerateInstance(_))));
}

#[test]
fn burkholder_compensation_identity_for_terminal_value() {
    let cfg = small_cfg();
    let part = verify::catalogue::catalogue_grid(cfg.grid_cells).unwrap();
    let r = verify::run_burkholder(2.0, &Instance::Terminal.build(&part).unwrap(), &cfg).unwrap();
    assert_eq!(r.kind, StatKind::Ratio);
    assert!(r.pass, "{r:?}");
}

#[test]
fn theorem1_gap_vanishes_for_aligned_and_adapted_integrands() {
    let cfg = small_cfg();
    let part = Partition::dyadic(2).unwrap();
    let step = ProcessExpansion::deterministic(&[1.0, -2.0, 0.5, 3.0], &part).unwrap();
    let adapted = Instance::Adapted.build(&part).unwrap();
    for u in [step, adapted] {
        let r = verify::run_theorem1(&u, &[2, 3, 4], &cfg).unwrap();
        assert!(r.pass);
        assert!(r.detail_value("final_gap").unwrap().abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn theorem1_terminal_value_halves_each_depth() {
    let cfg = small_cfg();
    let r = verify::run_check("theorem1", &cfg).unwrap();
    let gaps: Vec<f64> = (1..=6).map(|d| r.detail_value(&format!("gap_depth_{d}")).unwrap()).collect();
    assert!(gaps.windows(2).all(|g| g[1] < g[0]));
    assert!((r.detail_value("v_x").unwrap() - 2.0).abs() < 1e-12);
    assert!(r.value <= 0.05);
}

#[test]
fn reports_are_seed_deterministic() {
    let cfg = small_cfg();
    for id in ["isometry", "prop3_pathwise", "duality"] {
        let a = serde_json::to_string(&verify::run_check(id, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&verify::run_check(id, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
    let other = CheckConfig { seed: 8, ..small_cfg() };
    assert_ne!(
        verify::run_check("isometry", &cfg).unwrap().inputs_digest,
        verify::run_check("isometry", &other).unwrap().inputs_digest
    );
}
