//! Builds a growth sequence that forces `liminf g_n |S_n| = 0` on a
//! Gaussian walk, and one that forces `|g_n S_n| -> infinity`.

use reclab::constructions::{
    construct_recurrent_growth, construct_transient_growth, validate_recurrent_growth, validate_transient_growth,
    DeterministicOracle, StableWalkQuantiles, UniformQuantiles, WalkCoverageOracle,
};
use reclab::distributions::DistributionSpec;

pub fn run_example() -> reclab::Result<()> {
    let mut trace = DeterministicOracle::new(|n| 1.0 / n as f64);
    let built = construct_recurrent_growth(&mut trace, 6, 1 << 20)?;
    println!("trace Y_n = 1/n: breakpoints {:?}", built.breakpoints);

    let spec = DistributionSpec::gaussian();
    let mut oracle = WalkCoverageOracle::new(&spec, 2000, 8)?;
    let built = construct_recurrent_growth(&mut oracle, 4, 1 << 40)?;
    println!("Gaussian walk: breakpoints {:?} ({:?})", built.breakpoints, built.stop);
    let held_out = validate_recurrent_growth(&spec, &built.breakpoints, 2.0 / 4f64.sqrt(), 500, 9)?;
    println!("  {} of {} fresh paths reach min g_n |S_n| < 1", held_out.successes, held_out.paths);

    let uniform = construct_transient_growth(&mut UniformQuantiles, 8)?;
    let g: Vec<f64> = (1..=8).map(|n| uniform.growth.value(n)).collect();
    println!("uniform variables: g = {g:?}");

    let built = construct_transient_growth(&mut StableWalkQuantiles::new(&spec)?, 40)?;
    let v = validate_transient_growth(&spec, &built.growth, 20, 40, 10.0, 500, 10)?;
    println!("Gaussian walk, n <= 40: {} of {} paths keep g_n |S_n| > 10 on [20, 40]", v.successes, v.paths);
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
