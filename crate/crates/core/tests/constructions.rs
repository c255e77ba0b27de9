use proptest::prelude::*;
use reclab::constructions::{
    construct_recurrent_growth, construct_transient_growth, recertify, DeterministicOracle, MonteCarloQuantiles,
    QuantileOracle, StableWalkQuantiles, StopReason, UniformQuantiles, WalkCoverageOracle,
};
use reclab::distributions::DistributionSpec;
use reclab::walk_engine::GrowthSequence;

#[test]
fn walk_construction_levels_and_recertification() {
    let spec = DistributionSpec::gaussian();
    let mut oracle = WalkCoverageOracle::new(&spec, 3000, 4).unwrap();
    let built = construct_recurrent_growth(&mut oracle, 4, 1 << 30).unwrap();
    assert_eq!(built.stop, StopReason::Completed);
    let b = &built.breakpoints;
    assert!(b.windows(2).all(|w| w[0] < w[1]));
    let GrowthSequence::Constructed { breakpoints, .. } = &built.growth else { panic!("constructed growth expected") };
    assert_eq!(breakpoints, b);
    let mut start = 1;
    for (j, &end) in b.iter().enumerate() {
        let level = ((j + 1) as f64).sqrt();
        assert_eq!(built.growth.value(start), level);
        assert_eq!(built.growth.value(end - 1), level);
        start = end;
    }
    let replay = recertify(&mut oracle, b).unwrap();
    for (j, c) in replay.iter().enumerate() {
        let target = 1.0 - 0.5f64.powi(j as i32 + 1);
        assert!(c.p_hat + (c.p_hat - c.lower) >= target, "level {}: {c:?}", j + 1);
    }
    for (r, c) in replay.iter().zip(&built.coverage) {
        assert!(r.p_hat >= c.p_hat && r.lower >= c.lower, "{r:?} below {c:?}");
    }

    let mut again = WalkCoverageOracle::new(&spec, 3000, 4).unwrap();
    assert_eq!(construct_recurrent_growth(&mut again, 4, 1 << 30).unwrap(), built);
}

fn check_transient(oracle: &mut dyn QuantileOracle, n_max: u64) {
    let built = construct_transient_growth(oracle, n_max).unwrap();
    assert!(built.bound_sum.is_finite());
    let atoms: f64 = (1..=n_max).map(|n| oracle.atom_at_zero(n)).sum();
    assert!(built.bound_sum <= 2.0 * atoms + 2.0 + 1e-12);
    if let Some(s) = built.small_ball_sum {
        assert!(s <= built.bound_sum * (1.0 + 1e-12), "{s} > {}", built.bound_sum);
    }
    let g: Vec<f64> = (1..=n_max).map(|n| built.growth.value(n)).collect();
    assert!(g.windows(2).all(|w| w[0] <= w[1]) && g[0] > 0.0);
}

#[test]
fn transient_bound_is_finite_and_dominates() {
    check_transient(&mut UniformQuantiles, 60);
    for spec in [
        DistributionSpec::gaussian(),
        DistributionSpec::cauchy(),
        DistributionSpec::symmetric_stable(0.5, 1.0).unwrap(),
    ] {
        check_transient(&mut StableWalkQuantiles::new(&spec).unwrap(), 60);
    }
    check_transient(&mut MonteCarloQuantiles::new(&DistributionSpec::gaussian(), 100, 3).unwrap(), 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn deterministic_traces_are_reproducible(power in 0.3f64..2.0, j_max in 1u32..6) {
        let run = || {
            let mut o = DeterministicOracle::new(move |n: u64| (n as f64).powf(-power));
            construct_recurrent_growth(&mut o, j_max, 1 << 24).unwrap()
        };
        let a = run();
        prop_assert_eq!(&a, &run());
        prop_assert!(a.breakpoints.windows(2).all(|w| w[0] < w[1]));
        let mut m = 1u64;
        for (j, &b) in a.breakpoints.iter().enumerate() {
            // The first k >= m with k^-power < 1/(j+1), plus one.
            let level = (j + 1) as f64;
            let mut k = m;
            while (k as f64).powf(-power) >= 1.0 / level {
                k += 1;
            }
            prop_assert_eq!(b, k + 1);
            m = b;
        }
    }
}
