use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::charfn_analysis::SandwichParams;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::walk_engine::{GrowthSequence, SumMode, VerdictThresholds, WindowSpec, DEFAULT_BURN_IN_BLOCKS};

/// Every experiment parameter, with all defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "DistributionSpec::gaussian")]
    pub spec: DistributionSpec,
    #[serde(default = "unit_growth")]
    pub growth: GrowthSequence,
    #[serde(default = "default_windows")]
    pub windows: Vec<WindowSpec>,
    #[serde(default)]
    pub simulate: SimulateParams,
    #[serde(default)]
    pub probs: ProbsParams,
    #[serde(default)]
    pub dominance: DominanceParams,
    #[serde(default)]
    pub llt: LltParams,
    #[serde(default)]
    pub dichotomy: DichotomyParams,
    #[serde(default)]
    pub kochen_stone: KochenStoneParams,
    #[serde(default)]
    pub construct: ConstructParams,
    #[serde(default)]
    pub remark3: Remark3Params,
}

fn unit_growth() -> GrowthSequence {
    GrowthSequence::Constant { value: 1.0 }
}

fn default_windows() -> Vec<WindowSpec> {
    vec![WindowSpec::Symmetric { radius: 0.5 }]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config resolves to defaults")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.spec.validate()?;
        cfg.growth.validate()?;
        for w in &cfg.windows {
            w.validate()?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Canonical JSON form: fixed field order, every default present.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateParams {
    pub max_exponent: u32,
    pub n_trajectories: u64,
    pub burn_in_blocks: u32,
    pub thresholds: VerdictThresholds,
}

impl Default for SimulateParams {
    fn default() -> Self {
        Self {
            max_exponent: 20,
            n_trajectories: 64,
            burn_in_blocks: DEFAULT_BURN_IN_BLOCKS,
            thresholds: VerdictThresholds::default(),
        }
    }
}

fn log_grid(lo: u64, hi: u64, per_decade: usize) -> Vec<u64> {
    let decades = ((hi as f64) / (lo as f64)).log10();
    let points = (decades * per_decade as f64).round() as usize;
    let mut out: Vec<u64> = (0..=points)
        .map(|i| ((lo as f64).ln() + (hi as f64 / lo as f64).ln() * i as f64 / points as f64).exp().round() as u64)
        .collect();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbsParams {
    pub n_grid: Vec<u64>,
    pub samples_per_n: u64,
    pub mode: SumMode,
}

impl Default for ProbsParams {
    fn default() -> Self {
        Self { n_grid: log_grid(100, 10_000, 5), samples_per_n: 200_000, mode: SumMode::ExactLaw }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DominanceParams {
    pub x_max: f64,
    pub grid_points: usize,
    pub deltas: Vec<f64>,
    /// Sums `S_n` probed for finite-support laws.
    pub sum_steps: Vec<u64>,
}

impl Default for DominanceParams {
    fn default() -> Self {
        Self { x_max: 10.0, grid_points: 401, deltas: vec![0.05, 0.1, 0.5, 1.0], sum_steps: vec![2, 4] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LltParams {
    pub n: u64,
    pub interval: (f64, f64),
    pub samples: u64,
    pub c_factor: f64,
    pub h0: f64,
    pub n0: u64,
    pub mode: SumMode,
}

impl Default for LltParams {
    fn default() -> Self {
        let p = SandwichParams::default();
        Self {
            n: 10_000,
            interval: (-0.05, 0.05),
            samples: 1_000_000,
            c_factor: p.c_factor,
            h0: p.h0,
            n0: p.n0,
            mode: p.mode,
        }
    }
}

impl LltParams {
    pub fn sandwich(&self) -> SandwichParams {
        SandwichParams { c_factor: self.c_factor, h0: self.h0, n0: self.n0, mode: self.mode }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DichotomyParams {
    pub m_list: Vec<f64>,
    pub n_grid: Vec<u64>,
    pub samples_per_n: u64,
    pub mode: SumMode,
}

impl Default for DichotomyParams {
    fn default() -> Self {
        Self {
            m_list: vec![0.1, 1.0, 10.0],
            n_grid: log_grid(1000, 100_000, 5),
            samples_per_n: 200_000,
            mode: SumMode::ExactLaw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KochenStoneParams {
    pub n: usize,
}

impl Default for KochenStoneParams {
    fn default() -> Self {
        Self { n: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageSource {
    /// Monte Carlo over walks of the configured spec.
    Walk,
    /// The deterministic sequence `Y_n = 1/n`.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantileSource {
    /// Closed-form radii for walks of the configured stable spec.
    Analytic,
    /// `Y_n` i.i.d. uniform on (0, 1).
    Uniform,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstructParams {
    pub coverage: CoverageSource,
    pub j_max: u32,
    pub n_cap: u64,
    pub oracle_paths: u64,
    pub holdout_paths: u64,
    pub quantiles: QuantileSource,
    pub n_max: u64,
    pub samples_per_mass: u64,
    /// Held-out check for the transient sequence: `min g_n |S_n| > level`
    /// over `[n_max / 2, n_max]`.
    pub validation_level: f64,
    /// Held-out success fraction required of either construction.
    pub holdout_fraction: f64,
}

impl Default for ConstructParams {
    fn default() -> Self {
        Self {
            coverage: CoverageSource::Walk,
            j_max: 5,
            n_cap: 1 << 40,
            oracle_paths: 10_000,
            holdout_paths: 1000,
            quantiles: QuantileSource::Analytic,
            n_max: 50,
            samples_per_mass: 100,
            validation_level: 10.0,
            holdout_fraction: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Remark3Params {
    pub n_max: u64,
    /// Largest `n` for which the multinomial sum is checked exactly.
    pub identity_check_max: u64,
    /// Largest `n` for which the lattice convolution of `S_2n` is compared.
    pub dp_check_max: u64,
}

impl Default for Remark3Params {
    fn default() -> Self {
        Self { n_max: 1000, identity_check_max: 200, dp_check_max: 200 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_and_hash_is_stable() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig::from_toml("master_seed = 0").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn nested_sections_parse() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            master_seed = 9
            [spec]
            family = "symmetric_stable"
            alpha = 1.0
            scale_c = 1.0
            [growth]
            type = "power_log"
            eps = 0.25
            [[windows]]
            kind = "interval"
            center = 1.0
            half_width = 0.25
            [simulate]
            max_exponent = 12
            "#,
        )
        .unwrap();
        assert_eq!(cfg.spec, DistributionSpec::cauchy());
        assert_eq!(cfg.simulate.max_exponent, 12);
        assert_eq!(cfg.simulate.n_trajectories, 64);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("seed = 3").is_err());
        assert!(ExperimentConfig::from_toml("[simulate]\nmax_exp = 3").is_err());
    }
}
