//! Local limit check: `P(S_n / a_n in I)` against `|I| f(0)` for a
//! 1.5-stable walk, plus the density at zero by quadrature.

use reclab::charfn_analysis::{density_at_zero, llt_sandwich_check, SandwichParams};
use reclab::distributions::DistributionSpec;

pub fn run_example() -> reclab::Result<()> {
    let law = density_at_zero(1.5, 1.0)?;
    println!("f(0) = {:.10} ({}), quadrature error {:.1e}", law.closed_form, law.form, law.relative_error());

    let spec = DistributionSpec::symmetric_stable(1.5, 1.0)?;
    let check = llt_sandwich_check(&spec, 10_000, (-0.05, 0.05), 1_000_000, SandwichParams::default(), 5)?;
    println!(
        "n = {}: {} of {} samples in the interval, density {:.4} vs f(0) = {:.4}, pass = {}",
        check.n, check.hits, check.samples, check.empirical_density, check.f0, check.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
