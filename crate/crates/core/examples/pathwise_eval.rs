//! Simulated paths, Charlier evaluation and a Monte Carlo isometry estimate.
use chaoslab::pathsim::{charlier, charlier_series, eval_chaos, mc_estimate, sample_path, CompiledChaos, CellTable};
use chaoslab::verify::catalogue::block_integral;

fn main() -> chaoslab::Result<()> {
    for n in 0..=4 {
        println!("C_{n}(0.5, 2) = {:.6} (series {:.6})", charlier(n, 0.5, 2.0), charlier_series(n, 0.5, 2.0));
    }
    let part = chaoslab::grid::Partition::uniform(4)?;
    let f = block_integral(&part, 0.0, 0.5, 2)?;
    let p = sample_path(7, 0);
    println!("path 0 of seed 7: {:?}, F = {}", p.jumps(), eval_chaos(&f, &p));

    let compiled = CompiledChaos::new(&f);
    let est = mc_estimate(100_000, 7, |path| {
        let v = compiled.eval(&CellTable::new(&part, path, compiled.max_degree()));
        v * v
    });
    println!(
        "E F² ≈ {:.5} ± {:.5} (exact {}), z = {:.2}",
        est.mean,
        est.stderr,
        f.second_moment(),
        est.z_score(f.second_moment())
    );
    Ok(())
}
