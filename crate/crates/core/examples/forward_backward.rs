//! Approximation of X_t = δ(u·1_[0,t]) by forward–backward sums on dyadic grids.
use chaoslab::chaos::ProcessExpansion;
use chaoslab::represent::approximation_gaps;
use chaoslab::verify::catalogue::increment;

fn main() -> chaoslab::Result<()> {
    let part = chaoslab::grid::Partition::uniform(2)?;
    let u = ProcessExpansion::constant_in_time(&increment(&part, 0.0, 1.0)?);
    let gaps = approximation_gaps(&u, &[1, 2, 3, 4, 5, 6], 8)?;
    println!("V(X) = {}", gaps.v_x);
    for (d, g) in gaps.depths.iter().zip(&gaps.gaps) {
        println!("depth {d}: V(X − Y^π) = {g:.6}  ({:.2}% of V(X))", 100.0 * g / gaps.v_x);
    }
    Ok(())
}
