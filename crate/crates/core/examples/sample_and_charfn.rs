//! Draws steps from each supported law, compares the empirical
//! characteristic function with the closed form, and scans the Cramer
//! margin.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reclab::distributions::{cramer_margin, sample, DistributionSpec};

pub fn run_example() -> reclab::Result<()> {
    let laws = [
        DistributionSpec::gaussian(),
        DistributionSpec::cauchy(),
        DistributionSpec::symmetric_stable(1.5, 1.0)?,
        DistributionSpec::four_point(2f64.sqrt())?,
        DistributionSpec::simple_lattice(1.0)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in &laws {
        let xs = sample(spec, 100_000, &mut rng)?;
        let t = 0.7;
        let empirical = xs.iter().map(|x| (t * x).cos()).sum::<f64>() / xs.len() as f64;
        let scan = cramer_margin(spec, 1.0, 50.0, 20_000)?;
        println!(
            "{spec:?}\n  phi(0.7) = {:.4}, empirical {:.4}, Cramer: {:?} (sup |phi| = {:.4})",
            spec.charfn(t),
            empirical,
            scan.verdict,
            scan.sup_abs_phi
        );
        assert!((empirical - spec.charfn(t)).abs() < 0.02);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
