//! Anticipating integrand → Itô–Skorohod integrand w, its predictable
//! projection, and the pathwise equality X_t = ∫ E(w_s|·) dÑ_s.
use chaoslab::pathsim::{eval_chaos, sample_path};
use chaoslab::represent::{ito_skorohod_w, predictable_projection};
use chaoslab::verify::catalogue::{catalogue_grid, Instance};

fn main() -> chaoslab::Result<()> {
    let part = catalogue_grid(8)?;
    for inst in [Instance::Terminal, Instance::Adapted, Instance::Mixed] {
        let u = inst.build(&part)?;
        let w = ito_skorohod_w(&u)?;
        for t in [0.5, 1.0] {
            let x = u.indefinite_skorohod(t)?;
            let proj = predictable_projection(&w, t)?;
            let gap = (0..1000u64)
                .map(|i| {
                    let p = sample_path(7, i);
                    Ok((eval_chaos(&x, &p) - proj.trace(&p)?.terminal()).abs())
                })
                .collect::<chaoslab::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            println!("{:>8} t={t}: max |X_t − Itô–Skorohod| over 1000 paths = {gap:.2e}", inst.tag());
        }
    }
    Ok(())
}
