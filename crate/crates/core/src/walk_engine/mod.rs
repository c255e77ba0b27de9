//! Streaming simulation of `S_n = X_1 + ... + X_n` with online tracking of
//! `g_n |S_n|` and window hits, aggregated over dyadic blocks
//! `[2^k, 2^{k+1})`.

mod engine;
mod growth;
pub(crate) mod probs;
mod report;
mod window;

pub use engine::{simulate_blocks, EngineConfig, SimulationRun, DEFAULT_BURN_IN_BLOCKS, MAX_EXPONENT};
pub use growth::{GrowthSequence, LevelRule, Limit};
pub use probs::{estimate_window_probs, ProbEstimate, SumMode, WindowProbEstimates};
pub use report::{
    accumulation_report, read_jsonl, running_min_profile, write_jsonl, AccumulationReport, BlockReport, MinProfile,
    MinProfileBuilder, RunHeader, VerdictThresholds, WindowEvidence, WindowVerdict,
};
pub use window::WindowSpec;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;

/// Stabilizing sequence `a_n = n^(1/alpha)` with zero centering.
///
/// The built-in stable families are strictly stable, so the slowly
/// varying factor `a_n / n^(1/alpha)` is identically 1. The lattice
/// families have finite variance and use `a_n = sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub alpha: f64,
}

impl Normalizer {
    pub fn for_spec(spec: &DistributionSpec) -> Self {
        Self { alpha: spec.attraction_index() }
    }

    #[inline]
    pub fn a(&self, n: u64) -> f64 {
        let nf = n as f64;
        if self.alpha == 2.0 {
            nf.sqrt()
        } else if self.alpha == 1.0 {
            nf
        } else {
            nf.powf(1.0 / self.alpha)
        }
    }

    pub fn b(&self, _n: u64) -> f64 {
        0.0
    }
}

/// Density at zero of the law of `S_n / a_n` in the limit.
///
/// For the stable families this is the step law itself,
/// `Gamma(1 + 1/alpha) / (pi c^(1/alpha))`; for the lattice families it
/// is the normal density `1 / (sigma sqrt(2 pi))`.
pub fn limit_density_at_zero(spec: &DistributionSpec) -> f64 {
    match *spec {
        DistributionSpec::SymmetricStable { alpha, scale_c } => {
            crate::charfn_analysis::stable_density_at_zero_closed_form(alpha, scale_c)
        }
        _ => {
            let var = spec.variance().expect("finite-support laws have a variance");
            1.0 / (2.0 * std::f64::consts::PI * var).sqrt()
        }
    }
}

/// Local-limit prediction of the mean hit count of `window` in dyadic
/// block `k`: `|W| f_0 sum_{n in block} 1 / (a_n g_n)`.
pub fn llt_block_mean(spec: &DistributionSpec, growth: &GrowthSequence, window: &WindowSpec, k: u32) -> f64 {
    let norm = Normalizer::for_spec(spec);
    let f0 = limit_density_at_zero(spec);
    let lo = 1u64 << k;
    let terms: Vec<f64> = (lo..2 * lo).map(|n| 1.0 / (norm.a(n) * growth.value(n))).collect();
    window.width() * f0 * crate::numeric::pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_rules() {
        let n = Normalizer::for_spec(&DistributionSpec::gaussian());
        assert_eq!(n.a(16), 4.0);
        assert_eq!(n.b(16), 0.0);
        let c = Normalizer::for_spec(&DistributionSpec::cauchy());
        assert_eq!(c.a(16), 16.0);
        let s = Normalizer::for_spec(&DistributionSpec::symmetric_stable(1.5, 1.0).unwrap());
        assert!((s.a(8) - 4.0).abs() < 1e-12);
        let lat = Normalizer::for_spec(&DistributionSpec::simple_lattice(1.0).unwrap());
        assert_eq!(lat.a(9), 3.0);
    }

    #[test]
    fn gaussian_limit_density() {
        let f = limit_density_at_zero(&DistributionSpec::gaussian());
        assert!((f - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    }
}
