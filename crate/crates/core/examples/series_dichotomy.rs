//! Fits the decay of `P(|g_n S_n| < M)` for several radii and checks that
//! all radii give the same verdict.

use reclab::criteria::{dichotomy_probe, EstimatorConfig};
use reclab::distributions::DistributionSpec;
use reclab::walk_engine::{GrowthSequence, SumMode};

pub fn run_example() -> reclab::Result<()> {
    let spec = DistributionSpec::symmetric_stable(1.5, 1.0)?;
    let n_grid: Vec<u64> = (0..=8).map(|i| (100.0 * 10f64.powf(i as f64 / 4.0)).round() as u64).collect();
    let cfg = EstimatorConfig { n_grid, samples_per_n: 200_000, seed: 3, mode: SumMode::ExactLaw };
    for eps in [0.1, 0.5] {
        let report = dichotomy_probe(&spec, &GrowthSequence::power(eps)?, &[1.0, 10.0, 100.0], &cfg)?;
        println!("g_n = n^{eps}: consistent = {}", report.consistent);
        for v in &report.verdicts {
            println!(
                "  M = {:>4}: {:?}, exponent {:.3} +- {:.3}",
                v.m,
                v.series.verdict,
                v.series.exponent.unwrap_or(f64::NAN),
                v.series.se.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
