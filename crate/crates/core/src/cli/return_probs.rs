//! Return probabilities of the four-point walk with steps `{+-1, +-a}`.
//!
//! With `a` irrational the walk behaves like the planar simple walk, and
//! `P(S_2n = 0) = 4^-2n sum_m (2n)! / (m!^2 (n-m)!^2) = (C(2n, n) 4^-n)^2`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::distributions::{atom_prob_profile, DistributionSpec, MAX_EXACT_STEPS};
use crate::error::{invalid, Result};
use crate::numeric::KahanSum;

pub const REMARK3_MAX_N: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remark3Row {
    pub n: u64,
    /// `P(S_2n = 0)`.
    pub p_return: f64,
    pub pi_n_p: f64,
    /// `sum_{m <= n} P(S_2m = 0)`.
    pub partial_sum: f64,
    /// `ln(n) / pi`, the growth rate of the partial sums.
    pub log_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Remark3Table {
    pub a_param: f64,
    pub rows: Vec<Remark3Row>,
    /// Every `n` where the multinomial sum equals the squared central term.
    pub identity_checked_to: u64,
    pub identity_holds: bool,
    /// Largest relative gap between the convolution and the closed form.
    pub dp_checked_to: u64,
    pub dp_max_rel_error: f64,
}

fn factorials(n: u64) -> Vec<BigUint> {
    let mut f = vec![BigUint::one()];
    for k in 1..=n {
        let next = f.last().expect("nonempty") * BigUint::from(k);
        f.push(next);
    }
    f
}

/// `sum_m (2n)! / (m!^2 (n-m)!^2) == C(2n, n)^2`, checked exactly.
fn multinomial_identity(n: u64, fact: &[BigUint]) -> bool {
    let n = n as usize;
    let total = (0..=n).fold(BigUint::zero(), |acc, m| {
        let d = &fact[m] * &fact[m] * &fact[n - m] * &fact[n - m];
        acc + &fact[2 * n] / d
    });
    let central = &fact[2 * n] / (&fact[n] * &fact[n]);
    total == &central * &central
}

/// `(C(2n, n) / 4^n)^2` as an exact rational.
pub fn return_probability_exact(n: u64) -> BigRational {
    let fact = factorials(2 * n);
    let central = &fact[2 * n as usize] / (&fact[n as usize] * &fact[n as usize]);
    let num = num_bigint::BigInt::from(&central * &central);
    let den = num_bigint::BigInt::from(BigUint::one() << (4 * n));
    BigRational::new(num, den)
}

/// Exact table for `n = 1..=n_max`, with the multinomial identity checked
/// on `n <= identity_max` and the lattice convolution (for `a = sqrt 2`)
/// compared on `2n <= 2 dp_max`.
pub fn remark3_table(n_max: u64, identity_max: u64, dp_max: u64) -> Result<Remark3Table> {
    if n_max == 0 || n_max > REMARK3_MAX_N {
        return Err(invalid(format!("n_max must lie in 1..={REMARK3_MAX_N}")));
    }
    if 2 * dp_max > MAX_EXACT_STEPS {
        return Err(invalid(format!("dp_max must be at most {}", MAX_EXACT_STEPS / 2)));
    }
    let fact = factorials(2 * identity_max);
    let identity_holds = (1..=identity_max).all(|n| multinomial_identity(n, &fact));
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut acc = KahanSum::default();
    let mut exact = Vec::with_capacity(n_max as usize);
    let mut central = BigUint::one();
    for n in 1..=n_max {
        central = central * BigUint::from(2 * n) * BigUint::from(2 * n - 1) / BigUint::from(n * n);
        let p = BigRational::new_raw(
            num_bigint::BigInt::from(&central * &central),
            num_bigint::BigInt::from(BigUint::one() << (4 * n)),
        )
        .to_f64()
        .expect("probability is representable");
        exact.push(p);
        acc.add(p);
        let nf = n as f64;
        rows.push(Remark3Row {
            n,
            p_return: p,
            pi_n_p: std::f64::consts::PI * nf * p,
            partial_sum: acc.value(),
            log_reference: nf.ln() / std::f64::consts::PI,
        });
    }
    let a_param = std::f64::consts::SQRT_2;
    let mut dp_max_rel_error = 0.0f64;
    if dp_max > 0 {
        let spec = DistributionSpec::four_point(a_param)?;
        let profile = atom_prob_profile(&spec, 2 * dp_max, 0, 0)?;
        for n in 1..=dp_max.min(n_max) {
            let dp = profile[2 * n as usize];
            let e = exact[n as usize - 1];
            dp_max_rel_error = dp_max_rel_error.max((dp - e).abs() / e);
        }
    }
    Ok(Remark3Table {
        a_param,
        rows,
        identity_checked_to: identity_max,
        identity_holds,
        dp_checked_to: dp_max.min(n_max),
        dp_max_rel_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_return_probability() {
        assert_eq!(return_probability_exact(1), BigRational::new(1.into(), 4.into()));
        let t = remark3_table(3, 3, 3).unwrap();
        assert_eq!(t.rows[0].p_return, 0.25);
        assert!(t.identity_holds);
        assert!(t.dp_max_rel_error < 1e-14);
        assert_eq!(t.rows[1].p_return, 36.0 / 256.0);
    }
}
