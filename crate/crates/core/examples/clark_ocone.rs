//! Clark–Ocone decomposition over a window [s, t], reconstructed exactly.
use chaoslab::represent::{clark_ocone, clark_ocone_kernel_route};
use chaoslab::verify::catalogue::{block_integral, increment};

fn main() -> chaoslab::Result<()> {
    let part = chaoslab::grid::Partition::uniform(4)?;
    let g = block_integral(&part, 0.0, 1.0, 2)?.add(&increment(&part, 0.25, 0.75)?.scale(3.0))?;
    for (s, t) in [(0.0, 1.0), (0.25, 0.5), (0.5, 0.5)] {
        let co = clark_ocone(&g, s, t)?;
        let back = co.reconstruct()?;
        let direct = clark_ocone_kernel_route(&g, s, t)?;
        println!(
            "[{s}, {t}]: E(G|outside) has E² = {:.4}, martingale part E² = {:.4}, reconstruction error {:.1e}, kernel route error {:.1e}",
            co.conditional.second_moment(),
            co.stochastic_part()?.second_moment(),
            back.max_abs_diff(&g.lift(back.partition())?)?,
            co.stochastic_part()?.max_abs_diff(&direct)?
        );
    }
    Ok(())
}
