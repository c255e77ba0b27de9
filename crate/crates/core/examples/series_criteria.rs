//! Convergence of `sum 1/(a_n g_n)` by exact comparison and by numeric
//! tail fitting, and the resulting prediction of the accumulation set.

use reclab::criteria::{predict_k, series_verdict_numeric, series_verdict_power};
use reclab::distributions::DistributionSpec;
use reclab::walk_engine::GrowthSequence;

pub fn run_example() -> reclab::Result<()> {
    for (alpha, eps, beta) in [(2.0, 0.5, 0.0), (2.0, 0.5, 1.5), (1.5, 0.3, 0.0), (1.0, 0.01, 0.0)] {
        let v = series_verdict_power(alpha, &GrowthSequence::power_log(eps, beta)?)?;
        println!("alpha = {alpha}, g_n = n^{eps} ln^{beta}: {:?} ({})", v.verdict, v.note);
    }
    let v = series_verdict_numeric(|n| 1.0 / (n as f64).powf(1.3), 10_000_000);
    println!("numeric n^-1.3: {:?}, exponent {:?}", v.verdict, v.exponent);

    let cases = [
        (DistributionSpec::gaussian(), GrowthSequence::constant(1.0)?),
        (DistributionSpec::gaussian(), GrowthSequence::power(0.6)?),
        (DistributionSpec::simple_lattice(1.0)?, GrowthSequence::constant(0.5)?),
        (DistributionSpec::four_point(2f64.sqrt())?, GrowthSequence::constant(1.0)?),
        (DistributionSpec::symmetric_stable(0.7, 1.0)?, GrowthSequence::constant(1.0)?),
    ];
    for (spec, growth) in &cases {
        let p = predict_k(spec, growth)?;
        println!("{spec:?} with {growth:?}:\n  {:?}\n  {}", p.set, p.rationale);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
