use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::growth::GrowthSequence;
use super::window::WindowSpec;
use crate::distributions::{DistributionSpec, StepSampler, SumSampler};
use crate::error::{invalid, Result};
use crate::numeric::KahanSum;
use crate::rng::{derive_seed, stream};

/// Minimum samples per grid point accepted by the estimator.
pub const MIN_SAMPLES: u64 = 10_000;

const SAMPLES_PER_STREAM: u64 = 4096;

/// How a fresh `S_n` is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SumMode {
    /// Add `n` independent steps.
    Stepwise,
    /// Draw `S_n` from its exact law in O(1) (see `SumSampler`).
    #[default]
    ExactLaw,
}

/// Draws `samples` independent values of `S_n`, in parallel but with a
/// fixed assignment of samples to RNG streams.
pub(crate) fn sample_sums(
    spec: &DistributionSpec,
    n: u64,
    samples: u64,
    seed: u64,
    mode: SumMode,
    mut visit: impl FnMut(f64) + Send,
) -> Result<()> {
    let streams = samples.div_ceil(SAMPLES_PER_STREAM);
    let step = StepSampler::new(spec)?;
    let agg = SumSampler::new(spec)?;
    let chunks: Vec<Vec<f64>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream(seed, s);
            let count = SAMPLES_PER_STREAM.min(samples - s * SAMPLES_PER_STREAM);
            (0..count)
                .map(|_| match mode {
                    SumMode::ExactLaw => agg.sample_sum(n, &mut rng),
                    SumMode::Stepwise => {
                        let mut acc = KahanSum::default();
                        for _ in 0..n {
                            acc.add(step.sample(&mut rng));
                        }
                        acc.value()
                    }
                })
                .collect()
        })
        .collect();
    for c in chunks {
        c.into_iter().for_each(&mut visit);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbEstimate {
    pub n: u64,
    pub p_hat: f64,
    /// 95% normal-approximation half width.
    pub ci_half_width: f64,
    pub hits: u64,
    pub samples: u64,
}

impl ProbEstimate {
    pub fn from_counts(n: u64, hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Self { n, p_hat: p, ci_half_width: 1.96 * (p * (1.0 - p) / samples as f64).sqrt(), hits, samples }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowProbEstimates {
    pub spec: DistributionSpec,
    pub growth: GrowthSequence,
    pub window: WindowSpec,
    pub mode: SumMode,
    pub points: Vec<ProbEstimate>,
}

/// Estimates `P(g_n S_n in window)` on `n_grid` from fresh walks.
pub fn estimate_window_probs(
    spec: &DistributionSpec,
    growth: &GrowthSequence,
    window: &WindowSpec,
    n_grid: &[u64],
    samples_per_n: u64,
    master_seed: u64,
    mode: SumMode,
) -> Result<WindowProbEstimates> {
    spec.validate()?;
    growth.validate()?;
    window.validate()?;
    if n_grid.is_empty() || n_grid[0] == 0 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("n_grid must be nonempty, positive and strictly increasing"));
    }
    if samples_per_n < MIN_SAMPLES {
        return Err(invalid(format!("samples_per_n must be at least {MIN_SAMPLES}")));
    }
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let g = growth.value(n);
        let mut hits = 0u64;
        sample_sums(spec, n, samples_per_n, derive_seed(master_seed, n), mode, |s| {
            if window.contains(g * s) {
                hits += 1;
            }
        })?;
        points.push(ProbEstimate::from_counts(n, hits, samples_per_n));
    }
    Ok(WindowProbEstimates { spec: *spec, growth: growth.clone(), window: *window, mode, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_event() {
        let est = estimate_window_probs(
            &DistributionSpec::gaussian(),
            &GrowthSequence::constant(1.0).unwrap(),
            &WindowSpec::symmetric(1e9).unwrap(),
            &[1, 5, 10],
            MIN_SAMPLES,
            1,
            SumMode::Stepwise,
        )
        .unwrap();
        assert!(est.points.iter().all(|p| p.p_hat == 1.0 && p.ci_half_width == 0.0));
    }

    #[test]
    fn rejects_bad_grid() {
        let g = GrowthSequence::constant(1.0).unwrap();
        let w = WindowSpec::symmetric(1.0).unwrap();
        let s = DistributionSpec::gaussian();
        assert!(estimate_window_probs(&s, &g, &w, &[5, 5], MIN_SAMPLES, 1, SumMode::ExactLaw).is_err());
        assert!(estimate_window_probs(&s, &g, &w, &[0, 5], MIN_SAMPLES, 1, SumMode::ExactLaw).is_err());
        assert!(estimate_window_probs(&s, &g, &w, &[5], 10, 1, SumMode::ExactLaw).is_err());
    }
}
