//! Lower bound on `P(A_n i.o.)` from pairwise joint probabilities, for
//! independent events and for nested events.

use reclab::cli::kochen_stone_report;
use reclab::criteria::kochen_stone_lower_bound;

pub fn run_example() -> reclab::Result<()> {
    let r = kochen_stone_report(10_000)?;
    println!("independent P(A_k) = 1/k: {:.6} (closed form {:.6})", r.independent_bound, r.independent_closed_form);
    println!("nested A_k = {{U < 1/k}}: {:.6} (closed form {:.6})", r.nested_bound, r.nested_closed_form);

    let p = vec![0.5; 1000];
    let bound = kochen_stone_lower_bound(&p, |j, k| if j == k { 0.5 } else { 0.25 }, 1000)?;
    println!("fair coin flips: {bound:.4}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
