//! Malliavin derivative, Skorohod integral and conditioning.
use chaoslab::chaos::ProcessExpansion;
use chaoslab::grid::CellSet;
use chaoslab::pathsim::{eval_chaos, PoissonPath};
use chaoslab::verify::catalogue::{block_integral, increment};

fn main() -> chaoslab::Result<()> {
    let part = chaoslab::grid::Partition::uniform(4)?;
    let n1 = increment(&part, 0.0, 1.0)?;
    let u = ProcessExpansion::constant_in_time(&n1);

    // δ(Ñ₁) = I₂(1^{⊗2}), pathwise Ñ₁² − N₁
    let d = u.skorohod();
    let path = PoissonPath::new(vec![0.3, 0.7])?;
    println!("δ(Ñ₁) on {:?} = {}", path.jumps(), eval_chaos(&d, &path));

    // X_t = δ(Ñ₁·1_{[0,t]}) = Ñ₁Ñ_t − Ñ_t − t
    let x = u.indefinite_skorohod(0.5)?;
    let (n1v, nt) = (path.compensated(1.0), path.compensated(0.5));
    println!("X_½ = {} (closed form {})", eval_chaos(&x, &path), n1v * nt - nt - 0.5);

    let f = block_integral(&part, 0.0, 1.0, 2)?;
    let lhs = f.mderivative().l2_inner(&u)?;
    let rhs = f.l2_inner(&d)?;
    println!("duality: E⟨DF, u⟩ = {lhs}, E[F δ(u)] = {rhs}");

    let early = CellSet::interval(&part, 0.0, 0.5)?;
    let cond = f.condition(&early)?;
    println!("E[I₂(1^⊗2) | F_[0,½]] has E F² = {} (full: {})", cond.second_moment(), f.second_moment());
    println!("‖F‖²_(1,2) = {}", f.seminorm_sq(1));
    Ok(())
}
