//! Fourier-analytic checks: the smoothed window functional
//! `A(x) = E[(1 - |X - x|)^+]`, the dominance inequality
//! `P(X in [x - d, x + d]) <= 4 P(|X| < d)`, stable densities at zero and
//! the local-limit sandwich around the origin.
//!
//! For a law with real characteristic function `phi`,
//!
//! ```text
//! A(x) = (2/pi) * int_0^inf cos(t x) (1 - cos t) / t^2 * phi(t) dt
//! ```
//!
//! since the triangle `(1 - |y|)^+` has Fourier transform `2 (1 - cos t) / t^2`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{exact_sum_law, AtomLaw, DistributionSpec};
use crate::error::{invalid, Error, Result};
use crate::numeric::{cauchy_cdf, gauss_legendre, normal_cdf, normal_sf, pairwise_sum};
use crate::rng::derive_seed;
use crate::walk_engine::{Normalizer, SumMode};

/// Target for the discarded Fourier tail.
pub const TAIL_TARGET: f64 = 1e-10;

/// Truncation used for laws whose characteristic function does not decay.
pub const ATOM_T_MAX: f64 = 2000.0;

const GL_ORDER: usize = 16;
const GRADED_LEVELS: i32 = 48;

/// A law that can be probed: exact atoms or a closed-form continuous law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeLaw {
    Atoms(AtomLaw),
    Normal {
        sigma: f64,
    },
    Cauchy {
        gamma: f64,
    },
    /// Symmetric stable with `phi(t) = exp(-c |t|^alpha)`, masses by inversion.
    Stable {
        alpha: f64,
        scale_c: f64,
    },
}

impl ProbeLaw {
    /// Law of a single step.
    pub fn from_spec(spec: &DistributionSpec) -> Result<Self> {
        Self::sum_of(spec, 1)
    }

    /// Law of `S_n`. Exact enumeration for the lattice families.
    pub fn sum_of(spec: &DistributionSpec, n: u64) -> Result<Self> {
        spec.validate()?;
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        Ok(match *spec {
            DistributionSpec::SymmetricStable { alpha, scale_c } => {
                let c = scale_c * n as f64;
                if alpha == 2.0 {
                    Self::Normal { sigma: (2.0 * c).sqrt() }
                } else if alpha == 1.0 {
                    Self::Cauchy { gamma: c }
                } else {
                    Self::Stable { alpha, scale_c: c }
                }
            }
            _ => Self::Atoms(exact_sum_law(spec, n)?),
        })
    }

    pub fn standard_normal() -> Self {
        Self::Normal { sigma: 1.0 }
    }

    pub fn charfn(&self, t: f64) -> f64 {
        match self {
            Self::Atoms(law) => law.charfn(t),
            Self::Normal { sigma } => (-0.5 * (sigma * t).powi(2)).exp(),
            Self::Cauchy { gamma } => (-gamma * t.abs()).exp(),
            Self::Stable { alpha, scale_c } => (-scale_c * t.abs().powf(*alpha)).exp(),
        }
    }

    /// `sup_{|s| >= t} |phi(s)|`.
    pub fn envelope(&self, t: f64) -> f64 {
        match self {
            Self::Atoms(_) => 1.0,
            _ => self.charfn(t).abs(),
        }
    }

    /// Mass of `[lo, hi]` when `closed`, else of `(lo, hi)`. The two agree
    /// for the continuous laws.
    pub fn interval_mass(&self, lo: f64, hi: f64, closed: bool) -> f64 {
        if hi < lo || (hi == lo && !closed) {
            return 0.0;
        }
        match self {
            Self::Atoms(law) => law.interval_mass(lo, hi, closed),
            Self::Normal { sigma } => {
                let (a, b) = (lo / sigma, hi / sigma);
                if a > 0.0 {
                    normal_sf(a) - normal_sf(b)
                } else if b < 0.0 {
                    normal_cdf(b) - normal_cdf(a)
                } else {
                    1.0 - normal_cdf(a) - normal_sf(b)
                }
            }
            Self::Cauchy { gamma } => {
                if lo > 0.0 {
                    ((gamma / lo).atan() - (gamma / hi).atan()) / PI
                } else if hi < 0.0 {
                    ((gamma / hi.abs()).atan() - (gamma / lo.abs()).atan()) / PI
                } else {
                    cauchy_cdf(hi, *gamma) - cauchy_cdf(lo, *gamma)
                }
            }
            Self::Stable { alpha, scale_c } => {
                let t_max = decay_cutoff(*alpha, *scale_c, 40.0);
                let step = (PI / (20.0 * (lo.abs().max(hi.abs()) + 1.0))).min(0.05);
                let f = |t: f64| ((t * hi).sin() - (t * lo).sin()) / t * (-scale_c * t.powf(*alpha)).exp();
                (half_line_integral(&f, t_max, step) / PI).clamp(0.0, 1.0)
            }
        }
    }
}

fn decay_cutoff(alpha: f64, c: f64, log_target: f64) -> f64 {
    (log_target / c).powf(1.0 / alpha)
}

/// `int_0^t_max f`, with geometric grading of the first `step` toward 0
/// and uniform panels of width about `step` afterwards. Panel sums are
/// combined by fixed-order pairwise summation.
fn half_line_integral<F: Fn(f64) -> f64 + Sync>(f: &F, t_max: f64, step: f64) -> f64 {
    let rule = gauss_legendre(GL_ORDER);
    let head = step.min(t_max);
    let mut panels = Vec::new();
    panels.push((0.0, head * 2f64.powi(-GRADED_LEVELS)));
    for j in (0..GRADED_LEVELS).rev() {
        panels.push((head * 2f64.powi(-j - 1), head * 2f64.powi(-j)));
    }
    if t_max > head {
        let count = ((t_max - head) / step).ceil().max(1.0) as usize;
        let width = (t_max - head) / count as f64;
        panels.extend((0..count).map(|i| (head + i as f64 * width, head + (i + 1) as f64 * width)));
    }
    let terms: Vec<f64> = panels
        .par_iter()
        .map(|&(a, b)| {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
        })
        .collect();
    pairwise_sum(&terms)
}

/// Truncation settings for the Fourier form of `A(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub t_max: f64,
    pub grid_step: f64,
    /// Bound on `|(2/pi) int_{t_max}^inf ...|`, namely `4 env(t_max) / (pi t_max)`.
    pub tail_bound: f64,
}

impl InversionConfig {
    pub fn new(t_max: f64, grid_step: f64, law: &ProbeLaw) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || !(grid_step > 0.0) {
            return Err(invalid("t_max and grid_step must be positive"));
        }
        Ok(Self { t_max, grid_step, tail_bound: tail_bound(law, t_max) })
    }

    /// Smallest power-of-two-refined `t_max` whose tail bound is below
    /// `TAIL_TARGET`; capped at `ATOM_T_MAX` for non-decaying laws.
    pub fn for_law(law: &ProbeLaw, x: f64) -> Self {
        let grid_step = (0.01f64).min(PI / (50.0 * (x.abs() + 1.0)));
        let t_max = match law {
            ProbeLaw::Atoms(_) => ATOM_T_MAX,
            _ => {
                let (mut lo, mut hi) = (0.0, 1.0);
                while tail_bound(law, hi) >= TAIL_TARGET {
                    lo = hi;
                    hi *= 2.0;
                }
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if tail_bound(law, mid) >= TAIL_TARGET {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
        };
        Self { t_max, grid_step, tail_bound: tail_bound(law, t_max) }
    }
}

fn tail_bound(law: &ProbeLaw, t_max: f64) -> f64 {
    4.0 * law.envelope(t_max) / (PI * t_max)
}

fn triangle_transform(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        0.5 - t * t / 24.0
    } else {
        let s = (0.5 * t).sin();
        2.0 * s * s / (t * t)
    }
}

/// Checks `phi >= -tol` on the quadrature grid of `cfg`.
pub fn certify_nonnegative(law: &ProbeLaw, cfg: &InversionConfig) -> Result<()> {
    const TOL: f64 = 1e-12;
    let count = (cfg.t_max / cfg.grid_step).ceil() as usize;
    let bad = (0..=count)
        .into_par_iter()
        .map(|i| (i as f64 * cfg.grid_step).min(cfg.t_max))
        .find_first(|&t| law.charfn(t) < -TOL);
    match bad {
        Some(t) => Err(Error::NegativeCharfn(format!("phi({t}) = {}", law.charfn(t)))),
        None => Ok(()),
    }
}

/// `A(x)` by the Fourier form, after certifying `phi >= 0`. The returned
/// value is within `cfg.tail_bound` plus quadrature error of the truth.
pub fn smoothed_window_mass_fourier(law: &ProbeLaw, x: f64, cfg: &InversionConfig) -> Result<f64> {
    certify_nonnegative(law, cfg)?;
    let f = |t: f64| (t * x).cos() * triangle_transform(t) * law.charfn(t);
    Ok(2.0 / PI * half_line_integral(&f, cfg.t_max, cfg.grid_step))
}

/// `A(x) = int_0^1 P(|X - x| <= r) dr` by quadrature over `r`; exact for atoms.
pub fn smoothed_window_mass_direct(law: &ProbeLaw, x: f64) -> f64 {
    match law {
        ProbeLaw::Atoms(a) => a.atoms.iter().map(|at| at.prob * (1.0 - (at.value - x).abs()).max(0.0)).sum(),
        _ => {
            let rule = gauss_legendre(GL_ORDER);
            crate::numeric::gl_integrate(|r| law.interval_mass(x - r, x + r, true), 0.0, 1.0, 32, &rule)
        }
    }
}

/// `A(x)`: exact enumeration for atoms, Fourier inversion otherwise.
pub fn smoothed_window_mass(law: &ProbeLaw, x: f64, cfg: &InversionConfig) -> Result<f64> {
    match law {
        ProbeLaw::Atoms(_) => {
            certify_nonnegative(law, cfg)?;
            Ok(smoothed_window_mass_direct(law, x))
        }
        _ => smoothed_window_mass_fourier(law, x, cfg),
    }
}

/// `P(X in [x - delta, x + delta]) / P(X in (-delta, delta))`. The caller
/// is responsible for `phi >= 0` (see `certify_nonnegative`).
pub fn dominance_ratio(law: &ProbeLaw, x: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) || !x.is_finite() {
        return Err(invalid("delta must be positive and x finite"));
    }
    let den = law.interval_mass(-delta, delta, false);
    if den <= 0.0 {
        return Err(Error::ZeroDenominator(format!("P(|X| < {delta}) = 0")));
    }
    Ok(law.interval_mass(x - delta, x + delta, true) / den)
}

/// The intermediate steps behind the factor 4, at unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceChain {
    pub x: f64,
    pub open_unit_mass: f64,
    pub a_zero: f64,
    pub a_x: f64,
    /// `P(X in [x - 1/2, x + 1/2]) / 2`.
    pub half_window_bound: f64,
    pub slack: f64,
}

impl DominanceChain {
    pub fn holds(&self) -> bool {
        self.open_unit_mass + self.slack >= self.a_zero
            && self.a_zero + self.slack >= self.a_x
            && self.a_x + self.slack >= self.half_window_bound
    }
}

/// Evaluates `P(|X| < 1) >= A(0) >= A(x) >= P(X in [x - 1/2, x + 1/2]) / 2`.
pub fn dominance_chain(law: &ProbeLaw, x: f64) -> Result<DominanceChain> {
    let c0 = InversionConfig::for_law(law, 0.0);
    let cx = InversionConfig::for_law(law, x);
    let exact = matches!(law, ProbeLaw::Atoms(_));
    Ok(DominanceChain {
        x,
        open_unit_mass: law.interval_mass(-1.0, 1.0, false),
        a_zero: smoothed_window_mass(law, 0.0, &c0)?,
        a_x: smoothed_window_mass(law, x, &cx)?,
        half_window_bound: 0.5 * law.interval_mass(x - 0.5, x + 0.5, true),
        slack: if exact { 1e-12 } else { c0.tail_bound + cx.tail_bound + 1e-8 },
    })
}

/// Density at zero of a symmetric stable limit law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub alpha: f64,
    pub scale_c: f64,
    /// Quadrature value of `(1/pi) int_0^inf exp(-c t^alpha) dt`.
    pub f0: f64,
    pub closed_form: f64,
    pub form: String,
}

impl LimitLaw {
    pub fn relative_error(&self) -> f64 {
        (self.f0 - self.closed_form).abs() / self.closed_form
    }
}

/// `Gamma(1 + 1/alpha) / (pi c^(1/alpha))`.
pub fn stable_density_at_zero_closed_form(alpha: f64, scale_c: f64) -> f64 {
    libm::tgamma(1.0 + 1.0 / alpha) / (PI * scale_c.powf(1.0 / alpha))
}

pub fn density_at_zero(alpha: f64, scale_c: f64) -> Result<LimitLaw> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [1, 2], got {alpha}")));
    }
    if !(scale_c > 0.0 && scale_c.is_finite()) {
        return Err(invalid("scale_c must be positive"));
    }
    let t_max = decay_cutoff(alpha, scale_c, 40.0);
    let f = |t: f64| (-scale_c * t.powf(alpha)).exp();
    let f0 = half_line_integral(&f, t_max, 0.25 * t_max.min(2.0)) / PI;
    let form = if alpha == 1.0 {
        format!("exp(-{scale_c} |t|), strictly stable, zero centering")
    } else {
        format!("exp(-{scale_c} |t|^{alpha})")
    };
    Ok(LimitLaw { alpha, scale_c, f0, closed_form: stable_density_at_zero_closed_form(alpha, scale_c), form })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichParams {
    pub c_factor: f64,
    pub h0: f64,
    pub n0: u64,
    pub mode: SumMode,
}

impl Default for SandwichParams {
    fn default() -> Self {
        Self { c_factor: 1.05, h0: 0.5, n0: 1000, mode: SumMode::ExactLaw }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub c_factor: f64,
    pub h0: f64,
    pub n0: u64,
    pub n: u64,
    pub interval: (f64, f64),
    pub f0: f64,
    pub hits: u64,
    pub samples: u64,
    pub empirical_density: f64,
    /// Whether the interval sits inside `[-h0, h0]`.
    pub within_h0: bool,
    pub pass: bool,
}

/// Estimates `P(S_n / a_n in I) / |I|` and tests it against
/// `(f0 / c, f0 c)`.
pub fn llt_sandwich_check(
    spec: &DistributionSpec,
    n: u64,
    interval: (f64, f64),
    samples: u64,
    params: SandwichParams,
    seed: u64,
) -> Result<SandwichCheck> {
    let DistributionSpec::SymmetricStable { alpha, scale_c } = *spec else {
        return Err(Error::Unsupported("the sandwich check needs symmetric stable steps".into()));
    };
    spec.validate()?;
    let (lo, hi) = interval;
    let width = hi - lo;
    if !(width > 0.0) || !width.is_finite() {
        return Err(invalid("interval must have positive finite length"));
    }
    if !(params.c_factor > 1.0) || !(params.h0 > 0.0) {
        return Err(invalid("c_factor must exceed 1 and h0 must be positive"));
    }
    if n < params.n0 {
        return Err(invalid(format!("n = {n} is below n0 = {}", params.n0)));
    }
    if samples == 0 {
        return Err(invalid("samples must be positive"));
    }
    let f0 = density_at_zero(alpha, scale_c)?.closed_form;
    let p = (f0 * width).min(1.0);
    let half_width = 1.96 * (p * (1.0 - p) / samples as f64).sqrt();
    let resolution = (params.c_factor - 1.0) * f0 * width / 2.0;
    if half_width >= resolution {
        return Err(Error::InsufficientPower(format!(
            "CI half width {half_width:.3e} at predicted mass {p:.3e} is not below {resolution:.3e}"
        )));
    }
    let a_n = Normalizer::for_spec(spec).a(n);
    let mut hits = 0u64;
    crate::walk_engine::probs::sample_sums(spec, n, samples, derive_seed(seed, n), params.mode, |s| {
        let z = s / a_n;
        if z > lo && z < hi {
            hits += 1;
        }
    })?;
    let empirical_density = hits as f64 / samples as f64 / width;
    Ok(SandwichCheck {
        c_factor: params.c_factor,
        h0: params.h0,
        n0: params.n0,
        n,
        interval,
        f0,
        hits,
        samples,
        empirical_density,
        within_h0: lo >= -params.h0 && hi <= params.h0,
        pass: empirical_density > f0 / params.c_factor && empirical_density < f0 * params.c_factor,
    })
}

/// Upper-bound check `P(|S_n| < a_n^(1 - eps)) <= (M + 1) a_n^(-eps)` for
/// stable steps with `alpha < 1` and `eps in (alpha, 1)`, where `M = f(0)`
/// bounds the limit density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallBallCheck {
    pub n: u64,
    pub eps: f64,
    pub bound: f64,
    pub p_hat: f64,
    pub ci_half_width: f64,
    pub pass: bool,
}

pub fn small_ball_check(spec: &DistributionSpec, n: u64, eps: f64, samples: u64, seed: u64) -> Result<SmallBallCheck> {
    let DistributionSpec::SymmetricStable { alpha, scale_c } = *spec else {
        return Err(Error::Unsupported("small-ball check needs symmetric stable steps".into()));
    };
    spec.validate()?;
    if alpha >= 1.0 || !(eps > alpha && eps < 1.0) {
        return Err(invalid("needs alpha < 1 and eps in (alpha, 1)"));
    }
    if n == 0 || samples == 0 {
        return Err(invalid("n and samples must be positive"));
    }
    let a_n = Normalizer::for_spec(spec).a(n);
    let radius = a_n.powf(1.0 - eps);
    let mut hits = 0u64;
    crate::walk_engine::probs::sample_sums(spec, n, samples, derive_seed(seed, n), SumMode::ExactLaw, |s| {
        if s.abs() < radius {
            hits += 1;
        }
    })?;
    let m = stable_density_at_zero_closed_form(alpha, scale_c);
    let bound = (m + 1.0) * a_n.powf(-eps);
    let p_hat = hits as f64 / samples as f64;
    let ci_half_width = 1.96 * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
    Ok(SmallBallCheck { n, eps, bound, p_hat, ci_half_width, pass: p_hat - ci_half_width <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_interval_mass_matches_cdf() {
        let z = ProbeLaw::standard_normal();
        let m = z.interval_mass(-1.0, 1.0, true);
        assert!((m - 0.682_689_492_137_085_9).abs() < 1e-14);
        assert!((z.interval_mass(2.5, 3.5, true) - (normal_cdf(3.5) - normal_cdf(2.5))).abs() < 1e-15);
    }

    #[test]
    fn stable_inversion_matches_closed_forms() {
        let s = ProbeLaw::Stable { alpha: 1.0000001, scale_c: 1.0 };
        let c = ProbeLaw::Cauchy { gamma: 1.0 };
        assert!((s.interval_mass(-0.3, 1.2, false) - c.interval_mass(-0.3, 1.2, false)).abs() < 1e-6);
    }

    #[test]
    fn fourier_matches_atoms() {
        let law = ProbeLaw::sum_of(&DistributionSpec::simple_lattice(0.3).unwrap(), 2).unwrap();
        let cfg = InversionConfig::for_law(&law, 0.2);
        let f = smoothed_window_mass_fourier(&law, 0.2, &cfg).unwrap();
        let d = smoothed_window_mass_direct(&law, 0.2);
        assert!((f - d).abs() < cfg.tail_bound + 1e-6, "{f} vs {d}");
    }

    #[test]
    fn negative_charfn_rejected() {
        let law = ProbeLaw::from_spec(&DistributionSpec::simple_lattice(1.0).unwrap()).unwrap();
        let cfg = InversionConfig::for_law(&law, 0.0);
        assert!(matches!(smoothed_window_mass(&law, 0.0, &cfg), Err(Error::NegativeCharfn(_))));
    }

    #[test]
    fn density_quadrature() {
        for (a, c) in [(1.0, 1.0), (1.3, 0.7), (1.7, 2.0), (2.0, 0.5)] {
            assert!(density_at_zero(a, c).unwrap().relative_error() < 1e-12);
        }
        assert!(density_at_zero(0.9, 1.0).is_err());
    }

    #[test]
    fn zero_denominator() {
        let law = ProbeLaw::sum_of(&DistributionSpec::simple_lattice(1.0).unwrap(), 1).unwrap();
        assert!(matches!(dominance_ratio(&law, 1.0, 0.5), Err(Error::ZeroDenominator(_))));
    }
}
