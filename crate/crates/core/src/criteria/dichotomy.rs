use serde::{Deserialize, Serialize};

use super::series::{classify_exponent, SeriesVerdict, Verdict, SE_FLOOR};
use crate::distributions::DistributionSpec;
use crate::error::{invalid, Error, Result};
use crate::numeric::weighted_linear_fit;
use crate::walk_engine::{estimate_window_probs, GrowthSequence, SumMode, WindowProbEstimates, WindowSpec};

/// Verdict on `sum P(g_n |S_n| < M)` with its almost-sure reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceVerdict {
    pub m: f64,
    pub series: SeriesVerdict,
    pub conclusion: String,
}

/// Classifies `sum p_n` from Monte Carlo estimates of
/// `p_n = P(g_n |S_n| < M)`.
///
/// Fits `ln p_n` against `ln n` weighted by inverse delta-method variances.
/// Zero estimates carry no log information and are dropped (they arise on
/// the wrong parity of lattice walks). The slope error is inflated by the
/// root reduced chi-square when the scatter exceeds the binomial noise.
pub fn theorem1_classify(est: &WindowProbEstimates) -> Result<RecurrenceVerdict> {
    let WindowSpec::Symmetric { radius } = est.window else {
        return Err(invalid("the criterion concerns symmetric windows |g_n S_n| < M"));
    };
    if !est.spec.is_symmetric() {
        return Err(Error::Unsupported("the criterion needs a symmetric step law".into()));
    }
    let pts: Vec<_> = est.points.iter().filter(|p| p.hits > 0 && p.hits < p.samples).collect();
    let dropped = est.points.len() - pts.len();
    let series = if pts.len() < 3 {
        SeriesVerdict {
            verdict: Verdict::Undetermined,
            method: super::Method::NumericTailFit,
            exponent: None,
            se: None,
            note: format!("only {} usable estimates", pts.len()),
        }
    } else {
        let x: Vec<f64> = pts.iter().map(|p| (p.n as f64).ln()).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.p_hat.ln()).collect();
        let w: Vec<f64> = pts.iter().map(|p| p.hits as f64 / (1.0 - p.p_hat)).collect();
        let (slope, intercept, se) =
            weighted_linear_fit(&x, &y, Some(&w)).ok_or_else(|| invalid("degenerate n grid"))?;
        let chi2: f64 = x.iter().zip(&y).zip(&w).map(|((a, b), c)| c * (b - intercept - slope * a).powi(2)).sum();
        let dof = (pts.len() - 2) as f64;
        let naive = se / (chi2 / dof).sqrt().max(f64::MIN_POSITIVE);
        let se = (naive * (chi2 / dof).sqrt().max(1.0)).max(SE_FLOOR);
        let exponent = -slope;
        SeriesVerdict {
            verdict: classify_exponent(exponent, se),
            method: super::Method::NumericTailFit,
            exponent: Some(exponent),
            se: Some(se),
            note: format!("weighted fit on {} estimates, {dropped} dropped, reduced chi2 {:.3}", pts.len(), chi2 / dof),
        }
    };
    let conclusion = match series.verdict {
        Verdict::Diverges => "liminf g_n |S_n| = 0 a.s.",
        Verdict::Converges => "lim g_n |S_n| = +inf a.s.",
        Verdict::Undetermined => "undetermined",
    };
    Ok(RecurrenceVerdict { m: radius, series, conclusion: conclusion.into() })
}

/// Monte Carlo settings shared by every `M` of a dichotomy probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub n_grid: Vec<u64>,
    pub samples_per_n: u64,
    pub seed: u64,
    pub mode: SumMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub verdicts: Vec<RecurrenceVerdict>,
    /// All determined verdicts agree.
    pub consistent: bool,
}

/// Classifies `sum P(g_n |S_n| < M)` for several `M`; the series must be
/// finite for all `M` or infinite for all `M`.
pub fn dichotomy_probe(
    spec: &DistributionSpec,
    growth: &GrowthSequence,
    m_list: &[f64],
    cfg: &EstimatorConfig,
) -> Result<DichotomyReport> {
    if m_list.len() < 3 || m_list.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
        return Err(invalid("need at least three positive radii"));
    }
    let (lo, hi) = m_list.iter().fold((f64::MAX, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(invalid("radii must span at least two decades"));
    }
    let verdicts = m_list
        .iter()
        .map(|&m| {
            let est = estimate_window_probs(
                spec,
                growth,
                &WindowSpec::symmetric(m)?,
                &cfg.n_grid,
                cfg.samples_per_n,
                cfg.seed,
                cfg.mode,
            )?;
            theorem1_classify(&est)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut determined = verdicts.iter().map(|v| v.series.verdict).filter(|v| *v != Verdict::Undetermined);
    let consistent = match determined.next() {
        Some(first) => determined.all(|v| v == first),
        None => true,
    };
    Ok(DichotomyReport { verdicts, consistent })
}
