//! Streams Gaussian walks rescaled by `g_n = n^eps` on both sides of the
//! threshold `eps = 1/2` and compares late-block window hits with the
//! prediction.

use reclab::criteria::predict_k;
use reclab::distributions::DistributionSpec;
use reclab::walk_engine::{
    accumulation_report, simulate_blocks, EngineConfig, GrowthSequence, VerdictThresholds, WindowSpec,
};

pub fn run_example() -> reclab::Result<()> {
    let spec = DistributionSpec::gaussian();
    for eps in [0.3, 0.7] {
        let growth = GrowthSequence::power(eps)?;
        let cfg = EngineConfig {
            spec,
            growth: growth.clone(),
            windows: vec![WindowSpec::symmetric(0.5)?],
            max_exponent: 16,
            n_trajectories: 32,
            master_seed: 2024,
            burn_in_blocks: 6,
        };
        let run = simulate_blocks(&cfg, None)?;
        let report = accumulation_report(&run, VerdictThresholds::default());
        let prediction = predict_k(&spec, &growth)?;
        let w = &report.windows[0];
        println!("eps = {eps}: predicted {:?}, observed {:?}", prediction.set, w.verdict);
        for (k, f) in &w.hit_fraction {
            println!("  block {k}: {:.2} of trajectories hit", f);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
