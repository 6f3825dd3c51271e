//! Partitions, symmetric kernels, contractions and lifting.
use chaoslab::grid::{Partition, SymKernel};

fn main() -> chaoslab::Result<()> {
    let part = Partition::uniform(2)?;
    println!("grid {:?}", part.points());

    // f(t₁,t₂) = 1_{[0,½]}(t₁), symmetrized
    let f = SymKernel::symmetrize([(vec![0, 0], 1.0), (vec![0, 1], 1.0)], 2, &part)?;
    println!("sym f: (0,0) = {}, (0,1) = {}, (1,0) = {}", f.get(&[0, 0]), f.get(&[0, 1]), f.get(&[1, 0]));

    let h = SymKernel::tensor_power(&[2.0, -1.0], 2, &part)?;
    println!("(2,-1)^⊗2: {:?}", h.entries().collect::<Vec<_>>());

    let b = SymKernel::tensor_power(&[1.0, 0.0], 1, &part)?;
    for (r, l) in [(1, 1), (1, 0), (0, 0)] {
        let c = b.contract(&b, r, l)?;
        println!("1_B ★_{r}^{l} 1_B: degree {}, entries {:?}", c.degree(), c.entries().collect::<Vec<_>>());
    }

    let fine = part.refine(&[0.25, 0.75])?;
    let lifted = b.lift(&fine)?;
    println!("lifted to {:?}: {:?}", fine.points(), lifted.entries().collect::<Vec<_>>());
    println!("‖f‖² = {}, ⟨f, h⟩ = {}", f.norm_sq(), f.inner(&h)?);
    Ok(())
}
