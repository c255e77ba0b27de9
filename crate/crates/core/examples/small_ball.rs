//! For stable steps with `alpha < 1` the walk is transient and small balls
//! around zero carry vanishing mass: `P(|S_n| < a_n^(1-eps)) <= (M+1) a_n^-eps`.

use reclab::charfn_analysis::small_ball_check;
use reclab::distributions::DistributionSpec;

pub fn run_example() -> reclab::Result<()> {
    let spec = DistributionSpec::symmetric_stable(0.7, 1.0)?;
    for n in [100, 10_000, 1_000_000] {
        let c = small_ball_check(&spec, n, 0.85, 200_000, 4)?;
        println!("n = {n:>7}: p = {:.5} +- {:.5}, bound {:.5}, pass = {}", c.p_hat, c.ci_half_width, c.bound, c.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
