use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reclab::distributions::{exact_sum_law, lattice_atom_prob, sample, DistributionSpec};
use reclab::rng::stream;

fn families() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::gaussian(),
        DistributionSpec::cauchy(),
        DistributionSpec::symmetric_stable(0.6, 1.3).unwrap(),
        DistributionSpec::symmetric_stable(1.5, 0.7).unwrap(),
        DistributionSpec::four_point(2f64.sqrt()).unwrap(),
        DistributionSpec::four_point(0.5).unwrap(),
        DistributionSpec::simple_lattice(1.0).unwrap(),
        DistributionSpec::simple_lattice(0.3).unwrap(),
    ]
}

#[test]
fn empirical_charfn_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for spec in families() {
        let xs = sample(&spec, 1_000_000, &mut rng).unwrap();
        for i in 0..50 {
            let t = -5.0 + 10.0 * i as f64 / 49.0;
            let emp = xs.iter().map(|x| (t * x).cos()).sum::<f64>() / xs.len() as f64;
            let d = (emp - spec.charfn(t)).abs();
            assert!(d < 0.01, "{spec:?} at t = {t}: deviation {d}");
        }
    }
}

fn central_binomial_squared(n: u64) -> BigRational {
    let mut c = BigUint::one();
    for k in 0..n {
        c = c * BigUint::from(2 * n - k) / BigUint::from(k + 1);
    }
    let c = BigRational::from_integer((c).into());
    let four_n = BigRational::from_integer(num_bigint::BigInt::from(4u32).pow(n as u32));
    let r = c / four_n;
    r.clone() * r
}

#[test]
fn four_point_returns_match_squared_central_binomials() {
    let spec = DistributionSpec::four_point(2f64.sqrt()).unwrap();
    for n in 1..=20u64 {
        let exact = central_binomial_squared(n).to_f64().unwrap();
        let dp = lattice_atom_prob(&spec, 2 * n, 0.0).unwrap();
        assert!((dp - exact).abs() <= 1e-14 * exact, "n = {n}: {dp} vs {exact}");
    }
}

#[test]
fn unreachable_points_have_no_mass() {
    let lattice = DistributionSpec::simple_lattice(1.0).unwrap();
    assert_eq!(lattice_atom_prob(&lattice, 3, 0.0).unwrap(), 0.0);
    assert_eq!(lattice_atom_prob(&lattice, 3, 0.5).unwrap(), 0.0);
    assert!(lattice_atom_prob(&DistributionSpec::gaussian(), 3, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charfn_is_real_even_and_bounded(t in -200.0f64..200.0, which in 0usize..8) {
        let spec = families()[which];
        let v = spec.charfn(t);
        prop_assert!(v.is_finite() && v.abs() <= 1.0 + 1e-15);
        prop_assert_eq!(v, spec.charfn(-t));
        prop_assert_eq!(spec.charfn(0.0), 1.0);
    }

    #[test]
    fn lattice_masses_sum_to_one(n in 1u64..40, a in 0.2f64..3.0, lattice in any::<bool>()) {
        let spec = if lattice {
            DistributionSpec::simple_lattice(a).unwrap()
        } else {
            DistributionSpec::four_point(a).unwrap()
        };
        let law = exact_sum_law(&spec, n).unwrap();
        prop_assert!((law.total_mass() - 1.0).abs() <= 1e-12);
        if n <= 8 {
            let by_point: f64 = law.atoms.iter().map(|at| lattice_atom_prob(&spec, n, at.value).unwrap()).sum();
            prop_assert!((by_point - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), id in any::<u64>(), which in 0usize..8) {
        let spec = families()[which];
        let a = sample(&spec, 64, &mut stream(seed, id)).unwrap();
        let b = sample(&spec, 64, &mut stream(seed, id)).unwrap();
        prop_assert_eq!(a, b);
    }
}
