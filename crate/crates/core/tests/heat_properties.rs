use expheat::heat::{apply_semigroup, SemigroupPlan};
use expheat::orlicz::lp_norm;
use expheat::{Grid, GridFunction};
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(1, 8.0, 128).unwrap()
}

/// Sum of a few Gaussian bumps, resolved on the grid.
fn bumps() -> impl Strategy<Value = GridFunction> {
    prop::collection::vec((-3.0..3.0f64, 0.4..1.5f64, -2.0..2.0f64), 1..4).prop_map(|terms| {
        GridFunction::from_fn(grid(), move |x| {
            terms
                .iter()
                .map(|(c, w, a)| a * (-((x[0] - c) / w).powi(2)).exp())
                .sum()
        })
        .unwrap()
    })
}

fn rough() -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(-1.0..1.0f64, 128).prop_map(|v| GridFunction::new(grid(), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semigroup_law(u in rough(), s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let two_step = apply_semigroup(&apply_semigroup(&u, s).unwrap(), t).unwrap();
        let one_step = apply_semigroup(&u, s + t).unwrap();
        let err = two_step.sub(&one_step).unwrap().sup_norm();
        prop_assert!(err <= 1e-10 * u.sup_norm().max(1e-300));
    }

    #[test]
    fn mass_is_conserved(u in rough(), t in 0.0..4.0f64) {
        let out = apply_semigroup(&u, t).unwrap();
        prop_assert!((out.mean() - u.mean()).abs() <= 1e-12);
    }

    #[test]
    fn maximum_principle(u in bumps(), t in 0.05..4.0f64) {
        let out = apply_semigroup(&u, t).unwrap();
        prop_assert!(out.max() <= u.max() + 1e-10);
        prop_assert!(out.min() >= u.min() - 1e-10);
    }

    #[test]
    fn lq_contraction(u in bumps(), t in 0.05..4.0f64, q in prop::sample::select(vec![1.0, 1.5, 2.0, 4.0, 10.0])) {
        let out = apply_semigroup(&u, t).unwrap();
        prop_assert!(lp_norm(&out, q).unwrap() <= lp_norm(&u, q).unwrap() * (1.0 + 1e-10));
    }

    #[test]
    fn positivity(u in bumps(), t in 0.05..4.0f64) {
        let pos = u.abs();
        let out = apply_semigroup(&pos, t).unwrap();
        prop_assert!(out.min() >= -1e-10 * pos.sup_norm());
    }

    #[test]
    fn linearity(u in rough(), v in rough(), a in -3.0..3.0f64, t in 0.0..2.0f64) {
        let lhs = apply_semigroup(&u.scaled(a).add(&v).unwrap(), t).unwrap();
        let rhs = apply_semigroup(&u, t).unwrap().scaled(a).add(&apply_semigroup(&v, t).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-12 * (1.0 + a.abs()));
    }
}

#[test]
fn plan_round_trip_2d() {
    let g = Grid::new(2, 4.0, 32).unwrap();
    let u = GridFunction::from_fn(g, |x| (x[0] * 0.7).sin() + x[1] * x[1] * 0.01).unwrap();
    let plan = SemigroupPlan::new(g);
    let back = plan.inverse(&plan.forward(&u).unwrap()).unwrap();
    assert!(back.sub(&u).unwrap().sup_norm() < 1e-13);
}
