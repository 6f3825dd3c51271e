//! Pathwise Itô integrals and the traces λ ↦ ∫_0^λ h dÑ.
use chaoslab::pathsim::{ito_integral, trace_y_lambda, FnIntegrand, PoissonPath};

fn main() -> chaoslab::Result<()> {
    let path = PoissonPath::new(vec![0.3, 0.7])?;
    let left = FnIntegrand { degree: 1, breakpoints: vec![], f: |p: &PoissonPath, s: f64| p.compensated_left(s) };
    let i = ito_integral(&left, &path, 1.0)?;
    // Ñ₁² = 2∫Ñ_{s−}dÑ_s + N₁
    println!("∫Ñ_(s−) dÑ_s = {i}; 2·{i} + N₁ = {} = Ñ₁² = {}", 2.0 * i + 2.0, path.compensated(1.0).powi(2));

    let trace = trace_y_lambda(&left, 1.0, &path)?;
    for lambda in [0.0, 0.3, 0.5, 0.7, 1.0] {
        println!("Y^{lambda} = {:+.4} (left limit {:+.4})", trace.value(lambda), trace.left_limit(lambda));
    }
    println!("jump sum Σ ΔY² = {}", trace.jump_sum(|before, after, _| (after - before).powi(2)));
    Ok(())
}
