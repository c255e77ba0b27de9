//! The two explicit growth-sequence constructions.
//!
//! * Recurrence preserving: given `liminf |Y_n| = 0`, choose breakpoints
//!   `1 = n_0 < n_1 < n_2 < ...` such that `|Y_k| < 1/j` for some `k` in
//!   `[n_{j-1}, n_j)` with probability at least `1 - 2^-j`, and set
//!   `g_n = sqrt(j)` on that block. Borel–Cantelli then gives
//!   `liminf g_n |Y_n| = 0`.
//! * Transience forcing: given `sum P(Y_n = 0) < infinity`, pick `delta_n`
//!   with `P(|Y_n| < delta_n) <= 2 max(P(Y_n = 0), 2^-n)` and take the
//!   running maximum of `h_n = n / delta_n`, so that `g_n |Y_n| -> infinity`.

use rand::distr::Distribution;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn_analysis::{stable_density_at_zero_closed_form, ProbeLaw};
use crate::distributions::{DistributionSpec, StepSampler, SumSampler};
use crate::error::{invalid, Error, Result};
use crate::rng::{derive_seed, stream, StreamRng};
use crate::walk_engine::{GrowthSequence, Normalizer};

/// Normal quantile used for every confidence bound in this module.
pub const Z95: f64 = 1.96;

/// Largest `n` for which a Monte Carlo quantile of mass `2^-n` is attempted.
pub const MAX_MC_QUANTILE_N: u64 = 20;

/// Gaussian skips keep the band this many step deviations away.
const SKIP_SIGMAS: f64 = 8.0;

/// Wilson score lower bound for `hits` successes out of `n`.
pub fn wilson_lower(hits: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (nf, p) = (n as f64, hits as f64 / n as f64);
    let z2 = Z95 * Z95;
    let centre = p + z2 / (2.0 * nf);
    let spread = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - spread) / (1.0 + z2 / nf)).max(0.0)
}

/// Estimated `P(|Y_k| < eps for some k in [m, M])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub start: u64,
    pub end: u64,
    pub eps: f64,
    pub p_hat: f64,
    /// Lower confidence bound; equals `p_hat` for exact oracles.
    pub lower: f64,
    pub samples: u64,
}

/// Source of first entrance times of `Y` into `(-eps, eps)`.
pub trait CoverageOracle {
    /// For each sample path, the first `k` in `[start, cap]` with
    /// `|Y_k| < eps`, or `None`.
    fn first_entries(&mut self, start: u64, eps: f64, cap: u64) -> Result<Vec<Option<u64>>>;

    /// Whether the oracle has no sampling error.
    fn is_exact(&self) -> bool;

    fn coverage(&mut self, start: u64, end: u64, eps: f64) -> Result<Coverage> {
        if end < start {
            return Err(invalid("empty range"));
        }
        let times = self.first_entries(start, eps, end)?;
        let hits = times.iter().filter(|t| t.is_some()).count() as u64;
        let samples = times.len() as u64;
        let p_hat = hits as f64 / samples as f64;
        let lower = if self.is_exact() { p_hat } else { wilson_lower(hits, samples) };
        Ok(Coverage { start, end, eps, p_hat, lower, samples })
    }
}

/// A fixed deterministic sequence `Y_n = f(n)`.
pub struct DeterministicOracle<F> {
    sequence: F,
}

impl<F: Fn(u64) -> f64> DeterministicOracle<F> {
    pub fn new(sequence: F) -> Self {
        Self { sequence }
    }
}

impl<F: Fn(u64) -> f64> CoverageOracle for DeterministicOracle<F> {
    fn first_entries(&mut self, start: u64, eps: f64, cap: u64) -> Result<Vec<Option<u64>>> {
        Ok(vec![(start.max(1)..=cap).find(|&k| (self.sequence)(k).abs() < eps)])
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Walk position at a given time.
#[derive(Debug, Clone, Copy)]
struct WalkState {
    n: u64,
    s: f64,
}

/// Advances a walk until `|S_n| < eps` or `n` passes `end`.
///
/// Gaussian steps far from the band are aggregated: `m` steps are taken at
/// once when the distance to the band is at least `SKIP_SIGMAS` standard
/// deviations of `S_m`, so by the Levy maximal inequality an entry during
/// the skipped stretch has probability below `4e-15`.
struct Stepper {
    step: StepSampler,
    gaussian_sigma: Option<f64>,
}

impl Stepper {
    fn new(spec: &DistributionSpec) -> Result<Self> {
        let gaussian_sigma = match *spec {
            DistributionSpec::SymmetricStable { alpha: 2.0, scale_c } => Some((2.0 * scale_c).sqrt()),
            _ => None,
        };
        Ok(Self { step: StepSampler::new(spec)?, gaussian_sigma })
    }

    fn run_until_entry(&self, st: &mut WalkState, eps: f64, end: u64, rng: &mut StreamRng) -> Option<u64> {
        loop {
            if st.s.abs() < eps {
                return Some(st.n);
            }
            if st.n >= end {
                return None;
            }
            let left = end - st.n;
            match self.gaussian_sigma {
                Some(sigma) => {
                    let gap = (st.s.abs() - eps) / (SKIP_SIGMAS * sigma);
                    let m = ((gap * gap).floor() as u64).clamp(1, left);
                    let z: f64 = StandardNormal.sample(rng);
                    st.s += sigma * (m as f64).sqrt() * z;
                    st.n += m;
                }
                None => {
                    st.s += self.step.sample(rng);
                    st.n += 1;
                }
            }
        }
    }
}

/// Monte Carlo coverage for `Y_n = S_n`. Every query draws `S_start`
/// exactly from the law of the sum and then walks forward on its own
/// stream, so memory stays O(paths).
pub struct WalkCoverageOracle {
    spec: DistributionSpec,
    paths: u64,
    seed: u64,
    stepper: Stepper,
    sums: SumSampler,
}

impl WalkCoverageOracle {
    pub fn new(spec: &DistributionSpec, paths: u64, seed: u64) -> Result<Self> {
        spec.validate()?;
        if paths == 0 {
            return Err(invalid("paths must be positive"));
        }
        Ok(Self { spec: *spec, paths, seed, stepper: Stepper::new(spec)?, sums: SumSampler::new(spec)? })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }
}

impl CoverageOracle for WalkCoverageOracle {
    fn first_entries(&mut self, start: u64, eps: f64, cap: u64) -> Result<Vec<Option<u64>>> {
        if !(eps > 0.0) || start == 0 {
            return Err(invalid("need eps > 0 and start >= 1"));
        }
        let query_seed = derive_seed(derive_seed(self.seed, start), eps.to_bits());
        let (stepper, sums) = (&self.stepper, &self.sums);
        Ok((0..self.paths)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(query_seed, i);
                let mut st = WalkState { n: start, s: sums.sample_sum(start, &mut rng) };
                stepper.run_until_entry(&mut st, eps, cap, &mut rng)
            })
            .collect())
    }

    fn is_exact(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    /// Not enough entrances before `n_cap` to certify the next level.
    CapReached,
    /// Even full coverage could not be certified with the oracle's sample size.
    OracleResolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrentConstruction {
    pub growth: GrowthSequence,
    /// `n_1 < n_2 < ...`, with `n_0 = 1` implicit.
    pub breakpoints: Vec<u64>,
    /// Certified coverage of each completed level.
    pub coverage: Vec<Coverage>,
    pub stop: StopReason,
    pub diagnostic: Option<String>,
}

/// Builds `g_n = sqrt(j)` on `[n_{j-1}, n_j)` for `j = 1..=j_max`, each
/// `n_j` the smallest index whose block coverage at `eps = 1/j` is
/// certified at `1 - 2^-j`.
pub fn construct_recurrent_growth(
    oracle: &mut dyn CoverageOracle,
    j_max: u32,
    n_cap: u64,
) -> Result<RecurrentConstruction> {
    if j_max == 0 || j_max > 60 {
        return Err(invalid("j_max must lie in 1..=60"));
    }
    let mut breakpoints = Vec::new();
    let mut coverage = Vec::new();
    let mut prev = 1u64;
    let mut stop = StopReason::Completed;
    let mut diagnostic = None;
    for j in 1..=j_max {
        let eps = 1.0 / j as f64;
        let target = 1.0 - 0.5f64.powi(j as i32);
        if prev >= n_cap {
            stop = StopReason::CapReached;
            diagnostic = Some(format!("level {j}: n_cap {n_cap} reached"));
            break;
        }
        let times = oracle.first_entries(prev, eps, n_cap - 1)?;
        let total = times.len() as u64;
        let lower_of = |c: u64| if oracle.is_exact() { c as f64 / total as f64 } else { wilson_lower(c, total) };
        if lower_of(total) < target {
            stop = StopReason::OracleResolution;
            diagnostic = Some(format!(
                "level {j}: {total} samples cannot certify coverage {target}; best lower bound {:.6}",
                lower_of(total)
            ));
            break;
        }
        let mut hits: Vec<u64> = times.into_iter().flatten().collect();
        hits.sort_unstable();
        let needed = (1..=total).find(|&c| lower_of(c) >= target).expect("full coverage certifies");
        if (hits.len() as u64) < needed {
            stop = StopReason::CapReached;
            diagnostic = Some(format!(
                "level {j}: only {} of {total} paths enter (-{eps}, {eps}) before n_cap {n_cap}, {needed} needed",
                hits.len()
            ));
            break;
        }
        let last = hits[needed as usize - 1];
        let next = last + 1;
        coverage.push(Coverage {
            start: prev,
            end: last,
            eps,
            p_hat: needed as f64 / total as f64,
            lower: lower_of(needed),
            samples: total,
        });
        breakpoints.push(next);
        prev = next;
    }
    Ok(RecurrentConstruction {
        growth: GrowthSequence::constructed(breakpoints.clone())?,
        breakpoints,
        coverage,
        stop,
        diagnostic,
    })
}

/// Re-estimates every block's coverage on the oracle.
pub fn recertify(oracle: &mut dyn CoverageOracle, breakpoints: &[u64]) -> Result<Vec<Coverage>> {
    let mut prev = 1;
    breakpoints
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let c = oracle.coverage(prev, b - 1, 1.0 / (i + 1) as f64);
            prev = b;
            c
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeldOutValidation {
    pub paths: u64,
    pub successes: u64,
    pub fraction: f64,
}

/// Fraction of fresh walks with `min_{n <= n_J} g_n |S_n| < threshold`
/// under the constructed growth with breakpoints `n_1 < ... < n_J`.
pub fn validate_recurrent_growth(
    spec: &DistributionSpec,
    breakpoints: &[u64],
    threshold: f64,
    paths: u64,
    seed: u64,
) -> Result<HeldOutValidation> {
    let stepper = Stepper::new(spec)?;
    let step = StepSampler::new(spec)?;
    if paths == 0 || !(threshold > 0.0) {
        return Err(invalid("need paths > 0 and threshold > 0"));
    }
    let successes = (0..paths)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = stream(seed, i);
            let mut st = WalkState { n: 1, s: step.sample(&mut rng) };
            for (j, &hi) in breakpoints.iter().enumerate() {
                let eps = threshold / ((j + 1) as f64).sqrt();
                if stepper.run_until_entry(&mut st, eps, hi - 1, &mut rng).is_some() {
                    return true;
                }
                st.s += step.sample(&mut rng);
                st.n += 1;
            }
            let levels = breakpoints.len().max(1) as f64;
            if st.s.abs() < threshold / levels.sqrt() {
                return true;
            }
            false
        })
        .count() as u64;
    Ok(HeldOutValidation { paths, successes, fraction: successes as f64 / paths as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantileMode {
    Analytic,
    MonteCarlo,
}

/// Source of radii `delta_n in (0, 1)` with
/// `P(|Y_n| < delta_n) <= 2 max(P(Y_n = 0), 2^-n)`.
pub trait QuantileOracle {
    fn mode(&self) -> QuantileMode;

    fn delta(&mut self, n: u64) -> Result<f64>;

    fn atom_at_zero(&self, n: u64) -> f64;

    /// `P(|Y_n| < delta)` when it can be evaluated.
    fn small_ball_prob(&self, n: u64, delta: f64) -> Option<f64>;
}

/// `Y_n` i.i.d. uniform on (0, 1): `delta_1 = 1/2`, `delta_n = 2^(1-n)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformQuantiles;

impl QuantileOracle for UniformQuantiles {
    fn mode(&self) -> QuantileMode {
        QuantileMode::Analytic
    }

    fn delta(&mut self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(invalid("n starts at 1"));
        }
        Ok(if n == 1 { 0.5 } else { 0.5f64.powi((n - 1) as i32) })
    }

    fn atom_at_zero(&self, _n: u64) -> f64 {
        0.0
    }

    fn small_ball_prob(&self, _n: u64, delta: f64) -> Option<f64> {
        Some(delta.clamp(0.0, 1.0))
    }
}

/// `Y_n = S_n` for symmetric stable steps:
/// `delta_n = min(2^-n a_n / f(0), 1/2)`, since the unimodal density of
/// `S_n / a_n` peaks at `f(0)` and so `P(|S_n| < delta) <= 2 delta f(0) / a_n`.
#[derive(Debug, Clone, Copy)]
pub struct StableWalkQuantiles {
    spec: DistributionSpec,
    f0: f64,
}

impl StableWalkQuantiles {
    pub fn new(spec: &DistributionSpec) -> Result<Self> {
        match *spec {
            DistributionSpec::SymmetricStable { alpha, scale_c } => {
                spec.validate()?;
                Ok(Self { spec: *spec, f0: stable_density_at_zero_closed_form(alpha, scale_c) })
            }
            _ => Err(Error::Unsupported(
                "lattice walks are recurrent: sum P(S_n = 0) diverges, so no transience-forcing sequence exists".into(),
            )),
        }
    }
}

impl QuantileOracle for StableWalkQuantiles {
    fn mode(&self) -> QuantileMode {
        QuantileMode::Analytic
    }

    fn delta(&mut self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(invalid("n starts at 1"));
        }
        let a_n = Normalizer::for_spec(&self.spec).a(n);
        Ok((a_n / self.f0 * 0.5f64.powf(n as f64)).min(0.5))
    }

    fn atom_at_zero(&self, _n: u64) -> f64 {
        0.0
    }

    fn small_ball_prob(&self, n: u64, delta: f64) -> Option<f64> {
        let law = ProbeLaw::sum_of(&self.spec, n).ok()?;
        Some(law.interval_mass(-delta, delta, false))
    }
}

/// Empirical quantile of `|S_n|` at mass `2^-n` from fresh samples.
pub struct MonteCarloQuantiles {
    spec: DistributionSpec,
    samples_per_mass: u64,
    seed: u64,
    sums: SumSampler,
}

impl MonteCarloQuantiles {
    /// `samples_per_mass` samples are drawn per unit of `1 / 2^-n`.
    pub fn new(spec: &DistributionSpec, samples_per_mass: u64, seed: u64) -> Result<Self> {
        if samples_per_mass < 100 {
            return Err(invalid("samples_per_mass must be at least 100"));
        }
        Ok(Self { spec: *spec, samples_per_mass, seed, sums: SumSampler::new(spec)? })
    }
}

impl QuantileOracle for MonteCarloQuantiles {
    fn mode(&self) -> QuantileMode {
        QuantileMode::MonteCarlo
    }

    fn delta(&mut self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(invalid("n starts at 1"));
        }
        if n > MAX_MC_QUANTILE_N {
            return Err(Error::Unsupported(format!(
                "tail mass 2^-{n} is beyond Monte Carlo reach (limit n = {MAX_MC_QUANTILE_N})"
            )));
        }
        let samples = self.samples_per_mass << n;
        let seed = derive_seed(self.seed, n);
        let sums = &self.sums;
        let mut abs: Vec<f64> = (0..samples.div_ceil(4096))
            .into_par_iter()
            .flat_map_iter(|c| {
                let mut rng = stream(seed, c);
                let count = 4096.min(samples - c * 4096);
                (0..count).map(move |_| sums.sample_sum(n, &mut rng).abs()).collect::<Vec<_>>()
            })
            .collect();
        let rank = (self.samples_per_mass as usize).saturating_sub(1);
        let (_, kth, _) = abs.select_nth_unstable_by(rank, f64::total_cmp);
        Ok(kth.clamp(f64::MIN_POSITIVE, 0.5))
    }

    fn atom_at_zero(&self, n: u64) -> f64 {
        crate::distributions::lattice_atom_prob(&self.spec, n, 0.0).unwrap_or(0.0)
    }

    fn small_ball_prob(&self, _n: u64, _delta: f64) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientConstruction {
    pub growth: GrowthSequence,
    pub mode: QuantileMode,
    pub deltas: Vec<f64>,
    /// `h_n = n / delta_n`.
    pub h: Vec<f64>,
    /// `sum_n 2 max(P(Y_n = 0), 2^-n)` over the constructed range.
    pub bound_sum: f64,
    /// `sum_n P(|Y_n| < delta_n)` when the oracle can evaluate it.
    pub small_ball_sum: Option<f64>,
}

/// `g_n = max(h_1, ..., h_n)` with `h_n = n / delta_n`, for `n <= n_max`.
pub fn construct_transient_growth(oracle: &mut dyn QuantileOracle, n_max: u64) -> Result<TransientConstruction> {
    if n_max == 0 {
        return Err(invalid("n_max must be positive"));
    }
    let mut deltas = Vec::with_capacity(n_max as usize);
    let mut h = Vec::with_capacity(n_max as usize);
    let mut g = Vec::with_capacity(n_max as usize);
    let mut bound_sum = 0.0;
    let mut small_ball_sum = Some(0.0);
    for n in 1..=n_max {
        let d = oracle.delta(n)?;
        if !(d > 0.0 && d < 1.0) {
            return Err(invalid(format!("oracle returned delta_{n} = {d}, outside (0, 1)")));
        }
        let hn = n as f64 / d;
        if !hn.is_finite() {
            return Err(invalid(format!("h_{n} overflows")));
        }
        deltas.push(d);
        h.push(hn);
        g.push(g.last().map_or(hn, |&prev: &f64| prev.max(hn)));
        bound_sum += 2.0 * oracle.atom_at_zero(n).max(0.5f64.powi(n as i32));
        small_ball_sum = small_ball_sum.and_then(|acc| oracle.small_ball_prob(n, d).map(|p| acc + p));
    }
    Ok(TransientConstruction {
        growth: GrowthSequence::tabulated(g)?,
        mode: oracle.mode(),
        deltas,
        h,
        bound_sum,
        small_ball_sum,
    })
}

/// Fraction of fresh walks with `min_{lo <= n <= hi} g_n |S_n| > level`.
pub fn validate_transient_growth(
    spec: &DistributionSpec,
    growth: &GrowthSequence,
    lo: u64,
    hi: u64,
    level: f64,
    paths: u64,
    seed: u64,
) -> Result<HeldOutValidation> {
    if lo == 0 || hi < lo || paths == 0 {
        return Err(invalid("need 1 <= lo <= hi and paths > 0"));
    }
    let step = StepSampler::new(spec)?;
    let successes = (0..paths)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = stream(seed, i);
            let mut s = 0.0;
            let mut ok = true;
            for n in 1..=hi {
                s += step.sample(&mut rng);
                if n >= lo && growth.value(n) * s.abs() <= level {
                    ok = false;
                }
            }
            ok
        })
        .count() as u64;
    Ok(HeldOutValidation { paths, successes, fraction: successes as f64 / paths as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_bounds() {
        assert!((wilson_lower(10_000, 10_000) - 10_000.0 / (10_000.0 + Z95 * Z95)).abs() < 1e-12);
        assert!(wilson_lower(50, 100) < 0.5);
        assert_eq!(wilson_lower(0, 10), 0.0);
    }

    #[test]
    fn harmonic_trace() {
        let mut o = DeterministicOracle::new(|n| 1.0 / n as f64);
        let c = construct_recurrent_growth(&mut o, 6, 1000).unwrap();
        assert_eq!(c.breakpoints, vec![3, 4, 5, 6, 7, 8]);
        assert_eq!(c.stop, StopReason::Completed);
    }

    #[test]
    fn cap_is_reported() {
        let mut o = DeterministicOracle::new(|n| 1.0 / n as f64);
        let c = construct_recurrent_growth(&mut o, 10, 6).unwrap();
        assert_eq!(c.stop, StopReason::CapReached);
        assert_eq!(c.breakpoints, vec![3, 4, 5, 6]);
    }

    #[test]
    fn small_oracle_cannot_certify_deep_levels() {
        let mut o = WalkCoverageOracle::new(&DistributionSpec::gaussian(), 20, 1).unwrap();
        let c = construct_recurrent_growth(&mut o, 8, 1 << 20).unwrap();
        assert_eq!(c.stop, StopReason::OracleResolution);
    }

    #[test]
    fn lattice_quantiles_refused() {
        assert!(StableWalkQuantiles::new(&DistributionSpec::simple_lattice(1.0).unwrap()).is_err());
    }

    #[test]
    fn mc_quantiles_refused_past_twenty() {
        let mut o = MonteCarloQuantiles::new(&DistributionSpec::gaussian(), 100, 3).unwrap();
        assert!(o.delta(21).is_err());
        let d = o.delta(3).unwrap();
        assert!(d > 0.0 && d < 0.5);
    }
}
