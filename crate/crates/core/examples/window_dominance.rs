//! Window-mass dominance: `P(|X - x| <= delta) <= 4 P(|X| <= delta)` for a
//! law with nonnegative characteristic function, checked on `S_2` of the
//! four-point walk (exact atoms) and on the Cauchy law (Fourier inversion).

use reclab::charfn_analysis::{dominance_chain, dominance_ratio, ProbeLaw};
use reclab::distributions::DistributionSpec;

pub fn run_example() -> reclab::Result<()> {
    let four = DistributionSpec::four_point(2f64.sqrt())?;
    let laws = [
        ("four-point S_2", ProbeLaw::sum_of(&four, 2)?),
        ("Cauchy", ProbeLaw::from_spec(&DistributionSpec::cauchy())?),
    ];
    for (name, law) in &laws {
        let mut worst = (0.0f64, 0.0, 0.0);
        for delta in [0.05, 0.1, 0.5, 1.0] {
            for i in 0..=200 {
                let x = -5.0 + 0.05 * i as f64;
                let r = dominance_ratio(law, x, delta)?;
                if r > worst.0 {
                    worst = (r, x, delta);
                }
            }
        }
        let chain = dominance_chain(law, 1.3)?;
        println!("{name}: max ratio {:.4} at x = {:.2}, delta = {}", worst.0, worst.1, worst.2);
        println!(
            "  P(|X|<1) = {:.5} >= A(0) = {:.5} >= A(1.3) = {:.5} >= {:.5}: {}",
            chain.open_unit_mass,
            chain.a_zero,
            chain.a_x,
            chain.half_window_bound,
            chain.holds()
        );
        assert!(worst.0 <= 4.0 && chain.holds());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
