//! Exact return probabilities of the four-point walk with steps
//! `+-1, +-sqrt(2)`: `P(S_2n = 0) ~ 1/(pi n)`, so the return series
//! diverges like `ln n / pi`.

use reclab::cli::{remark3_table, return_probability_exact};

pub fn run_example() -> reclab::Result<()> {
    println!("P(S_4 = 0) = {}", return_probability_exact(2));
    let table = remark3_table(400, 60, 60)?;
    for row in table.rows.iter().filter(|r| [1, 10, 100, 400].contains(&r.n)) {
        println!(
            "n = {:>3}  P = {:.6e}  pi n P = {:.5}  partial sum = {:.4}  ln(n)/pi = {:.4}",
            row.n, row.p_return, row.pi_n_p, row.partial_sum, row.log_reference
        );
    }
    println!("multinomial identity holds up to n = {}: {}", table.identity_checked_to, table.identity_holds);
    println!("lattice DP agrees to relative error {:.1e}", table.dp_max_rel_error);
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
