//! Products of multiple integrals, checked against pathwise evaluation.
use chaoslab::pathsim::{eval_chaos, PoissonPath};
use chaoslab::verify::catalogue::{block_integral, increment};

fn main() -> chaoslab::Result<()> {
    let part = chaoslab::grid::Partition::uniform(4)?;
    let nb = increment(&part, 0.0, 0.5)?;
    let sq = nb.multiply(&nb, 8)?;
    println!("Ñ(B)²: E = {}, degree {:?}, E F² = {}", sq.expectation(), sq.max_degree(), sq.second_moment());

    let g = block_integral(&part, 0.25, 1.0, 2)?.add(&increment(&part, 0.5, 1.0)?)?;
    let prod = sq.multiply(&g, 8)?;
    println!("(Ñ(B)²)·G has degree {:?}", prod.max_degree());
    for jumps in [vec![0.3, 0.7], vec![0.1, 0.2, 0.45, 0.9]] {
        let path = PoissonPath::new(jumps)?;
        println!(
            "path {:?}: product {:.12}, pathwise {:.12}",
            path.jumps(),
            eval_chaos(&prod, &path),
            eval_chaos(&sq, &path) * eval_chaos(&g, &path)
        );
    }
    match g.multiply(&prod, 4) {
        Err(e) => println!("above the degree cap: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
