use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{weighted_linear_fit, KahanSum};
use crate::walk_engine::GrowthSequence;

/// Smallest standard error a finite two-decade fit is allowed to claim.
pub const SE_FLOOR: f64 = 1e-3;

/// Number of log-spaced sample points in the fitted range.
pub const FIT_POINTS: usize = 41;

/// Decade-sum ratio at or above which a borderline series counts as
/// harmonic-like and therefore divergent.
pub const HARMONIC_RATIO: f64 = 1.0 - 1e-4;

const EXACT_SUM_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ExactComparison,
    NumericTailFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    pub verdict: Verdict,
    pub method: Method,
    /// Decay exponent `p` of the terms, `term ~ n^(-p)`.
    pub exponent: Option<f64>,
    pub se: Option<f64>,
    pub note: String,
}

impl SeriesVerdict {
    fn numeric(verdict: Verdict, exponent: Option<f64>, se: Option<f64>, note: impl Into<String>) -> Self {
        Self { verdict, method: Method::NumericTailFit, exponent, se, note: note.into() }
    }
}

/// Maps a fitted exponent to a verdict with a 3 standard error margin.
pub fn classify_exponent(exponent: f64, se: f64) -> Verdict {
    if exponent < 1.0 - 3.0 * se {
        Verdict::Diverges
    } else if exponent > 1.0 + 3.0 * se {
        Verdict::Converges
    } else {
        Verdict::Undetermined
    }
}

/// Exact verdict for `sum n^-(1/alpha + eps) ln(n)^-beta` by the Bertrand rule.
pub fn series_verdict_power(alpha: f64, growth: &GrowthSequence) -> Result<SeriesVerdict> {
    let GrowthSequence::PowerLog { eps, beta } = *growth else {
        return Err(Error::Unsupported("exact comparison needs power-log growth".into()));
    };
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(crate::error::invalid(format!("alpha must lie in (0, 2], got {alpha}")));
    }
    let p = 1.0 / alpha + eps;
    let diverges = p < 1.0 || (p == 1.0 && beta <= 1.0);
    let note = if p == 1.0 {
        format!("exponent exactly 1, log power {beta}: Bertrand series")
    } else {
        format!("p-series with exponent {p}")
    };
    Ok(SeriesVerdict {
        verdict: if diverges { Verdict::Diverges } else { Verdict::Converges },
        method: Method::ExactComparison,
        exponent: Some(p),
        se: None,
        note,
    })
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<u64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut out: Vec<u64> =
        (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64).collect();
    out.dedup();
    out
}

fn decay_slope(ns: &[u64], terms: &dyn Fn(u64) -> f64) -> Option<(f64, f64, f64)> {
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = ns.iter().map(|&n| terms(n).ln()).collect();
    let mean_x = x.iter().sum::<f64>() / x.len() as f64;
    weighted_linear_fit(&x, &y, None).map(|(s, _, se)| (-s, se, mean_x))
}

fn block_sum(lo: u64, hi: u64, terms: &dyn Fn(u64) -> f64) -> f64 {
    let mut acc = KahanSum::default();
    for n in lo..hi {
        acc.add(terms(n));
    }
    acc.value()
}

/// Classifies `sum terms(n)` from its tail on `[n_max / 100, n_max]`.
///
/// Local decay exponents are fitted separately on the two decades and
/// extrapolated to `n = infinity` under a `1 / ln n` drift, which absorbs
/// logarithmic factors. The verdict needs a 3 SE separation from 1, where
/// the SE is the largest of the regression error, the size of the
/// extrapolation and `SE_FLOOR`. When the exponent is indistinguishable
/// from 1, the two decade sums are compared: equal sums mean the partial
/// sums grow linearly in `ln n`, as for the harmonic series.
pub fn series_verdict_numeric(terms: impl Fn(u64) -> f64, n_max: u64) -> SeriesVerdict {
    let terms: &dyn Fn(u64) -> f64 = &terms;
    if n_max < 1000 {
        return SeriesVerdict::numeric(Verdict::Undetermined, None, None, "n_max below 1000 leaves no tail to fit");
    }
    let top = n_max as f64;
    let ns = log_grid(top / 100.0, top, FIT_POINTS);
    let values: Vec<f64> = ns.iter().map(|&n| terms(n)).collect();
    if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return SeriesVerdict::numeric(
            Verdict::Undetermined,
            None,
            None,
            format!("term at n = {} is not positive and finite", ns[i]),
        );
    }
    if let Some(i) = values.windows(2).position(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return SeriesVerdict::numeric(
            Verdict::Undetermined,
            None,
            None,
            format!("terms increase between n = {} and n = {}", ns[i], ns[i + 1]),
        );
    }
    let mid = ns.len() / 2;
    let (Some((p_all, se_all, _)), Some((p_lo, _, x_lo)), Some((p_hi, _, x_hi))) =
        (decay_slope(&ns, terms), decay_slope(&ns[..=mid], terms), decay_slope(&ns[mid..], terms))
    else {
        return SeriesVerdict::numeric(Verdict::Undetermined, None, None, "degenerate fit");
    };
    let drift = (p_lo - p_hi) / (1.0 / x_lo - 1.0 / x_hi);
    let p_inf = p_hi - drift / x_hi;
    let se = se_all.max((p_inf - p_hi).abs()).max(SE_FLOOR);
    let verdict = classify_exponent(p_inf, se);
    let note = format!("two-decade fit exponent {p_all:.6}, decade exponents {p_lo:.6} / {p_hi:.6}");
    if verdict != Verdict::Undetermined {
        return SeriesVerdict::numeric(verdict, Some(p_inf), Some(se), note);
    }
    if n_max > EXACT_SUM_LIMIT {
        return SeriesVerdict::numeric(verdict, Some(p_inf), Some(se), note + "; too long for the decade-sum test");
    }
    let lower = block_sum(n_max / 100, n_max / 10, terms);
    let upper = block_sum(n_max / 10, n_max, terms);
    let ratio = upper / lower;
    let verdict = if ratio >= HARMONIC_RATIO { Verdict::Diverges } else { Verdict::Undetermined };
    SeriesVerdict::numeric(verdict, Some(p_inf), Some(se), format!("{note}; decade-sum ratio {ratio:.6}"))
}
