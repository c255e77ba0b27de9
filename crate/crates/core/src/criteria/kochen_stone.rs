use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{pairwise_sum, KahanSum};

/// `(sum_{k<=n} p_k)^2 / sum_{j,k<=n} P(A_j n A_k)`, a lower bound for
/// `P(A_n i.o.)`. Indices are 1-based: `p[k - 1] = P(A_k)` and `joint(j, k)`
/// must be symmetric with `joint(k, k) = p_k`.
pub fn kochen_stone_lower_bound(p: &[f64], joint: impl Fn(usize, usize) -> f64 + Sync, n: usize) -> Result<f64> {
    if n == 0 || n > p.len() {
        return Err(invalid(format!("n must lie in 1..={}", p.len())));
    }
    if p[..n].iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(invalid("probabilities must lie in [0, 1]"));
    }
    let num = pairwise_sum(&p[..n]);
    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|j| {
            let mut acc = KahanSum::new(0.5 * joint(j, j));
            for k in j + 1..=n {
                acc.add(joint(j, k));
            }
            acc.value()
        })
        .collect();
    let den = 2.0 * pairwise_sum(&rows);
    if den <= 0.0 {
        if num > 0.0 {
            return Err(Error::ZeroDenominator("joint probabilities vanish while sum p > 0".into()));
        }
        return Ok(0.0);
    }
    Ok((num * num / den).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCheck {
    pub c: f64,
    pub n0: usize,
    pub pairs_checked: u64,
    pub violations: u64,
    /// Largest `P(A_j n A_k) / (P(A_j) P(A_{k-j}))` seen.
    pub worst_ratio: f64,
}

impl CorrelationCheck {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `P(A_j n A_k) <= c P(A_j) P(A_{k-j})` for `j < k <= n`, `k - j >= n0`.
pub fn check_correlation_condition(
    joint: impl Fn(usize, usize) -> f64 + Sync,
    p: &[f64],
    c: f64,
    n0: usize,
    n: usize,
) -> Result<CorrelationCheck> {
    if n > p.len() || n0 == 0 || !(c > 0.0) {
        return Err(invalid("need n <= len(p), n0 >= 1 and c > 0"));
    }
    let per_row: Vec<(u64, u64, f64)> = (1..=n)
        .into_par_iter()
        .map(|j| {
            let (mut checked, mut bad, mut worst) = (0u64, 0u64, 0.0f64);
            for k in j + n0..=n {
                let bound = p[j - 1] * p[k - j - 1];
                let joint_jk = joint(j, k);
                checked += 1;
                if joint_jk > c * bound * (1.0 + 1e-12) {
                    bad += 1;
                }
                let ratio = if bound > 0.0 {
                    joint_jk / bound
                } else if joint_jk > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                };
                worst = worst.max(ratio);
            }
            (checked, bad, worst)
        })
        .collect();
    let (pairs_checked, violations, worst_ratio) =
        per_row.into_iter().fold((0, 0, 0.0f64), |(a, b, w), (x, y, z)| (a + x, b + y, w.max(z)));
    Ok(CorrelationCheck { c, n0, pairs_checked, violations, worst_ratio })
}
