use chaoslab::chaos::ChaosExpansion;
use chaoslab::grid::{Partition, SymKernel};
use chaoslab::pathsim::{eval_chaos, PoissonPath};
use chaoslab::represent::clark_ocone;
use proptest::prelude::*;

const CELLS: usize = 4;

fn arb_chaos(max_degree: usize) -> impl Strategy<Value = ChaosExpansion> {
    let part = Partition::uniform(CELLS).unwrap();
    (-2.0f64..2.0, prop::collection::vec(prop::collection::vec((prop::collection::vec(0..CELLS, 0..=max_degree), -1.0f64..1.0), 0..4), max_degree))
        .prop_map(move |(c, raw)| {
            let mut f = ChaosExpansion::constant(c, &part);
            for (n, entries) in raw.into_iter().enumerate() {
                let degree = n + 1;
                let entries = entries.into_iter().filter(|(idx, _)| idx.len() == degree);
                let k = SymKernel::symmetrize(entries, degree, &part).unwrap();
                f = f.add(&ChaosExpansion::from_kernel(k)).unwrap();
            }
            f
        })
}

fn arb_path() -> impl Strategy<Value = PoissonPath> {
    prop::collection::vec(0.001f64..0.999, 0..6).prop_map(|mut j| {
        j.sort_by(f64::total_cmp);
        j.dedup();
        PoissonPath::new(j).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_pathwise_product(f in arb_chaos(2), g in arb_chaos(2), path in arb_path()) {
        let fg = f.multiply(&g, 4).unwrap();
        let lhs = eval_chaos(&fg, &path);
        let rhs = eval_chaos(&f, &path) * eval_chaos(&g, &path);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn expectation_of_product_is_inner_product(f in arb_chaos(3), g in arb_chaos(3)) {
        let e = f.multiply(&g, 6).unwrap().expectation();
        let inner = f.l2_inner(&g).unwrap();
        prop_assert!((e - inner).abs() <= 1e-10 * (1.0 + inner.abs()));
    }

    #[test]
    fn clark_ocone_reconstructs(f in arb_chaos(3), s in 0usize..=2, len in 0usize..=2) {
        let (s, t) = (s as f64 / 4.0, (s + len) as f64 / 4.0);
        let co = clark_ocone(&f, s, t).unwrap();
        let back = co.reconstruct().unwrap();
        prop_assert!(back.max_abs_diff(&f.lift(back.partition()).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn derivative_lowers_degree_and_adjoint_holds(f in arb_chaos(3), g in arb_chaos(2)) {
        let u = g.mderivative();
        let lhs = f.mderivative().l2_inner(&u).unwrap();
        let rhs = f.l2_inner(&u.skorohod()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        if let Some(d) = f.max_degree() {
            prop_assert!(f.mderivative().max_degree().unwrap_or(0) < d.max(1));
        }
    }
}
