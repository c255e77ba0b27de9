//! Step-distribution families for the walks.
//!
//! Three symmetric families are built in:
//!
//! * `SymmetricStable { alpha, scale_c }` with characteristic function
//!   `exp(-c |t|^alpha)`;
//! * `FourPoint { a_param }`, mass 1/4 on each of `{-1, 1, -a, a}`, whose
//!   characteristic function `(cos t + cos a t) / 2` is nonlattice but
//!   violates Cramer's condition when `a` is irrational;
//! * `SimpleLattice { span_h }`, mass 1/2 on `{-h, h}`.
//!
//! `a_param` is stored as an `f64`, so it is never truly irrational.
//! Trigonometric evaluations are reliable for `|t| <= 1e8`; past roughly
//! `1e12` argument reduction loses all significant digits.

use std::f64::consts::PI;

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest `|t|` for which charfn values are considered trustworthy.
pub const CHARFN_VALIDITY_BAND: f64 = 1e8;

/// Largest step count accepted by the exact lattice convolution.
pub const MAX_EXACT_STEPS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    SymmetricStable { alpha: f64, scale_c: f64 },
    FourPoint { a_param: f64 },
    SimpleLattice { span_h: f64 },
}

impl DistributionSpec {
    pub fn symmetric_stable(alpha: f64, scale_c: f64) -> Result<Self> {
        let s = Self::SymmetricStable { alpha, scale_c };
        s.validate()?;
        Ok(s)
    }

    /// Standard normal steps: alpha = 2, c = 1/2.
    pub fn gaussian() -> Self {
        Self::SymmetricStable { alpha: 2.0, scale_c: 0.5 }
    }

    /// Standard Cauchy steps: alpha = 1, c = 1.
    pub fn cauchy() -> Self {
        Self::SymmetricStable { alpha: 1.0, scale_c: 1.0 }
    }

    pub fn four_point(a_param: f64) -> Result<Self> {
        let s = Self::FourPoint { a_param };
        s.validate()?;
        Ok(s)
    }

    pub fn simple_lattice(span_h: f64) -> Result<Self> {
        let s = Self::SimpleLattice { span_h };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::SymmetricStable { alpha, scale_c } => {
                if !(alpha > 0.0 && alpha <= 2.0) {
                    return Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")));
                }
                if !(scale_c > 0.0 && scale_c.is_finite()) {
                    return Err(invalid(format!("scale_c must be positive, got {scale_c}")));
                }
            }
            Self::FourPoint { a_param } => {
                if !(a_param > 0.0 && a_param.is_finite()) {
                    return Err(invalid(format!("a_param must be positive, got {a_param}")));
                }
            }
            Self::SimpleLattice { span_h } => {
                if !(span_h > 0.0 && span_h.is_finite()) {
                    return Err(invalid(format!("span_h must be positive, got {span_h}")));
                }
            }
        }
        Ok(())
    }

    /// Every built-in family is symmetric about zero.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    pub fn has_finite_support(&self) -> bool {
        !matches!(self, Self::SymmetricStable { .. })
    }

    /// Support atoms and their masses, for finite-support families.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match *self {
            Self::SymmetricStable { .. } => None,
            Self::FourPoint { a_param: a } => Some(vec![(-a, 0.25), (-1.0, 0.25), (1.0, 0.25), (a, 0.25)]),
            Self::SimpleLattice { span_h: h } => Some(vec![(-h, 0.5), (h, 0.5)]),
        }
    }

    /// Step variance, when finite.
    pub fn variance(&self) -> Option<f64> {
        match *self {
            Self::SymmetricStable { alpha: 2.0, scale_c } => Some(2.0 * scale_c),
            Self::SymmetricStable { .. } => None,
            Self::FourPoint { a_param: a } => Some((1.0 + a * a) / 2.0),
            Self::SimpleLattice { span_h: h } => Some(h * h),
        }
    }

    /// Index of the stable law whose domain of attraction contains the
    /// step law.
    pub fn attraction_index(&self) -> f64 {
        match *self {
            Self::SymmetricStable { alpha, .. } => alpha,
            _ => 2.0,
        }
    }

    pub fn charfn(&self, t: f64) -> f64 {
        charfn(self, t)
    }
}

/// Analytic characteristic function; real because every family is symmetric.
pub fn charfn(spec: &DistributionSpec, t: f64) -> f64 {
    match *spec {
        DistributionSpec::SymmetricStable { alpha, scale_c } => (-scale_c * t.abs().powf(alpha)).exp(),
        DistributionSpec::FourPoint { a_param } => 0.5 * (t.cos() + (a_param * t).cos()),
        DistributionSpec::SimpleLattice { span_h } => (span_h * t).cos(),
    }
}

/// Uniform on the open interval (0, 1).
#[inline]
pub(crate) fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Validated single-step sampler.
///
/// Stable draws use the Chambers–Mallows–Stuck transform with zero skew:
/// for `V ~ U(-pi/2, pi/2)` and `W ~ Exp(1)`,
///
/// ```text
/// X = sin(aV) / cos(V)^(1/a) * (cos((1-a)V) / W)^((1-a)/a)
/// ```
///
/// scaled by `c^(1/a)`. At `a = 1` this is `tan V` and at `a = 2` it
/// reduces to `2 sin(V) sqrt(W)`; both are special-cased.
#[derive(Debug, Clone, Copy)]
pub struct StepSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    Gaussian { scale: f64 },
    Cauchy { scale: f64 },
    Stable { alpha: f64, scale: f64 },
    TwoPoint { h: f64 },
    FourPoint { a: f64 },
}

impl StepSampler {
    pub fn new(spec: &DistributionSpec) -> Result<Self> {
        spec.validate()?;
        let kind = match *spec {
            DistributionSpec::SymmetricStable { alpha, scale_c } => {
                let scale = scale_c.powf(1.0 / alpha);
                if alpha == 2.0 {
                    SamplerKind::Gaussian { scale }
                } else if alpha == 1.0 {
                    SamplerKind::Cauchy { scale }
                } else {
                    SamplerKind::Stable { alpha, scale }
                }
            }
            DistributionSpec::FourPoint { a_param } => SamplerKind::FourPoint { a: a_param },
            DistributionSpec::SimpleLattice { span_h } => SamplerKind::TwoPoint { h: span_h },
        };
        Ok(Self { kind })
    }
}

impl Distribution<f64> for StepSampler {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            SamplerKind::Gaussian { scale } => {
                let v = PI * (open01(rng) - 0.5);
                let w = -open01(rng).ln();
                scale * 2.0 * v.sin() * w.sqrt()
            }
            SamplerKind::Cauchy { scale } => scale * (PI * (open01(rng) - 0.5)).tan(),
            SamplerKind::Stable { alpha, scale } => {
                let v = PI * (open01(rng) - 0.5);
                let w = -open01(rng).ln();
                let x = (alpha * v).sin() / v.cos().powf(1.0 / alpha)
                    * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha);
                scale * x
            }
            SamplerKind::TwoPoint { h } => {
                if rng.next_u32() & 1 == 0 {
                    -h
                } else {
                    h
                }
            }
            SamplerKind::FourPoint { a } => match rng.next_u32() & 3 {
                0 => -a,
                1 => -1.0,
                2 => 1.0,
                _ => a,
            },
        }
    }
}

/// `count` i.i.d. draws from `spec`.
pub fn sample<R: Rng + ?Sized>(spec: &DistributionSpec, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(invalid("count must be at least 1"));
    }
    let sampler = StepSampler::new(spec)?;
    Ok((0..count).map(|_| sampler.sample(rng)).collect())
}

/// Draws `S_n` directly from its exact law, without stepping.
///
/// Stable steps are strictly stable, so `S_n` has the law of
/// `n^(1/alpha) X_1`. Lattice families are binomial: the simple walk
/// makes `S_n = h (2B - n)` with `B ~ Bin(n, 1/2)`, and the four-point
/// walk splits `n` into horizontal (`+-1`) and vertical (`+-a`) moves.
#[derive(Debug, Clone, Copy)]
pub struct SumSampler {
    spec: DistributionSpec,
    step: StepSampler,
}

impl SumSampler {
    pub fn new(spec: &DistributionSpec) -> Result<Self> {
        Ok(Self { spec: *spec, step: StepSampler::new(spec)? })
    }

    pub fn sample_sum<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> f64 {
        if n == 0 {
            return 0.0;
        }
        match self.spec {
            DistributionSpec::SymmetricStable { alpha, .. } => (n as f64).powf(1.0 / alpha) * self.step.sample(rng),
            DistributionSpec::SimpleLattice { span_h } => {
                let b = binomial_half(n, rng);
                span_h * (2.0 * b as f64 - n as f64)
            }
            DistributionSpec::FourPoint { a_param } => {
                let horiz = binomial_half(n, rng);
                let vert = n - horiz;
                let i = 2 * binomial_half(horiz, rng) as i64 - horiz as i64;
                let j = 2 * binomial_half(vert, rng) as i64 - vert as i64;
                i as f64 + j as f64 * a_param
            }
        }
    }
}

fn binomial_half<R: Rng + ?Sized>(n: u64, rng: &mut R) -> u64 {
    if n == 0 {
        return 0;
    }
    Binomial::new(n, 0.5).expect("p = 1/2 is valid").sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CramerVerdict {
    SatisfiesCramer,
    FailsCramer,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CramerScanReport {
    pub band_lo: f64,
    pub band_hi: f64,
    pub sup_abs_phi: f64,
    /// Location of the observed supremum.
    pub argmax_t: f64,
    pub theta_estimate: f64,
    pub verdict: CramerVerdict,
    pub epsilon0: f64,
    pub note: String,
}

/// Scans `|phi|` on `[band_lo, band_hi]` and attaches the family's
/// analytic tail behaviour.
///
/// A grid scan cannot certify a limsup, so the verdict leans on known
/// structure: stable tails decrease monotonically, the simple lattice
/// returns to `|phi| = 1` at every multiple of `2 pi / h`, and the
/// four-point law comes arbitrarily close to 1 near `t = 2 pi k` without
/// reaching it.
pub fn cramer_margin(
    spec: &DistributionSpec,
    band_lo: f64,
    band_hi: f64,
    grid_points: usize,
) -> Result<CramerScanReport> {
    spec.validate()?;
    if !(band_lo > 0.0) {
        return Err(invalid("band_lo must be positive"));
    }
    if band_hi <= band_lo {
        return Err(invalid(format!("band_hi ({band_hi}) must exceed band_lo ({band_lo})")));
    }
    if grid_points < 2 {
        return Err(invalid("grid_points must be at least 2"));
    }
    let step = (band_hi - band_lo) / (grid_points - 1) as f64;
    let mut sup = 0.0f64;
    let mut argmax = band_lo;
    let mut visit = |t: f64| {
        let v = charfn(spec, t).abs().min(1.0);
        if v > sup {
            sup = v;
            argmax = t;
        }
    };
    for i in 0..grid_points {
        visit(band_lo + i as f64 * step);
    }
    // Known peak locations are probed exactly in addition to the grid.
    let peak_period = match *spec {
        DistributionSpec::SimpleLattice { span_h } => Some(2.0 * PI / span_h),
        DistributionSpec::FourPoint { .. } => Some(2.0 * PI),
        DistributionSpec::SymmetricStable { .. } => None,
    };
    if let Some(period) = peak_period {
        let first = (band_lo / period).ceil() as u64;
        let last = (band_hi / period).floor() as u64;
        for k in first..=last {
            visit(k as f64 * period);
        }
    }

    let report = match *spec {
        DistributionSpec::SymmetricStable { alpha, scale_c } => {
            let theta = (-scale_c * band_lo.powf(alpha)).exp();
            CramerScanReport {
                band_lo,
                band_hi,
                sup_abs_phi: sup,
                argmax_t: argmax,
                theta_estimate: theta,
                verdict: CramerVerdict::SatisfiesCramer,
                epsilon0: (1.0 - theta) / 2.0,
                note: format!("|phi| is decreasing in |t|; sup over |t| >= {band_lo} equals {theta:e}"),
            }
        }
        DistributionSpec::SimpleLattice { span_h } => CramerScanReport {
            band_lo,
            band_hi,
            sup_abs_phi: sup,
            argmax_t: argmax,
            theta_estimate: 1.0,
            verdict: CramerVerdict::FailsCramer,
            epsilon0: 0.0,
            note: format!("lattice law: |phi(2 pi k / {span_h})| = 1 for every integer k"),
        },
        DistributionSpec::FourPoint { .. } => CramerScanReport {
            band_lo,
            band_hi,
            sup_abs_phi: sup,
            argmax_t: argmax,
            theta_estimate: sup,
            verdict: CramerVerdict::Inconclusive,
            epsilon0: 0.0,
            note: "near-1 peaks of (1 + cos(2 pi frac(a k)))/2 recur at t = 2 pi k; \
                   the limsup equals 1 only for irrational a, which f64 cannot represent"
                .into(),
        },
    };
    Ok(report)
}

/// One atom of a discrete law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

/// A finite discrete law, atoms sorted by value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomLaw {
    pub atoms: Vec<Atom>,
}

impl AtomLaw {
    pub fn new(mut atoms: Vec<Atom>) -> Self {
        atoms.retain(|a| a.prob > 0.0);
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        Self { atoms }
    }

    pub fn total_mass(&self) -> f64 {
        crate::numeric::pairwise_sum(&self.atoms.iter().map(|a| a.prob).collect::<Vec<_>>())
    }

    /// Mass of `[lo, hi]` (closed) or `(lo, hi)` (open).
    pub fn interval_mass(&self, lo: f64, hi: f64, closed: bool) -> f64 {
        self.atoms
            .iter()
            .filter(|a| if closed { a.value >= lo && a.value <= hi } else { a.value > lo && a.value < hi })
            .map(|a| a.prob)
            .sum()
    }

    pub fn charfn(&self, t: f64) -> f64 {
        self.atoms.iter().map(|a| a.prob * (t * a.value).cos()).sum()
    }
}

/// Dense probability table over lattice coordinates `(i, j)` meaning the
/// value `i * u + j * v`, with `|i| + |j| <= steps`.
struct LatticeTable {
    radius: i64,
    probs: Vec<f64>,
}

impl LatticeTable {
    fn new(radius: i64) -> Self {
        let side = (2 * radius + 1) as usize;
        Self { radius, probs: vec![0.0; side * side] }
    }

    #[inline]
    fn idx(&self, i: i64, j: i64) -> usize {
        let side = 2 * self.radius + 1;
        ((i + self.radius) * side + (j + self.radius)) as usize
    }

    fn get(&self, i: i64, j: i64) -> f64 {
        if i.abs() > self.radius || j.abs() > self.radius {
            return 0.0;
        }
        self.probs[self.idx(i, j)]
    }
}

/// Moves of a finite-support step law in lattice coordinates.
fn lattice_moves(spec: &DistributionSpec) -> Result<Vec<(i64, i64, f64)>> {
    match spec {
        DistributionSpec::FourPoint { .. } => Ok(vec![(1, 0, 0.25), (-1, 0, 0.25), (0, 1, 0.25), (0, -1, 0.25)]),
        DistributionSpec::SimpleLattice { .. } => Ok(vec![(1, 0, 0.5), (-1, 0, 0.5)]),
        DistributionSpec::SymmetricStable { .. } => {
            Err(Error::Unsupported("exact atom probabilities need a finite-support law".into()))
        }
    }
}

fn lattice_value(spec: &DistributionSpec, i: i64, j: i64) -> f64 {
    match *spec {
        DistributionSpec::FourPoint { a_param } => i as f64 + j as f64 * a_param,
        DistributionSpec::SimpleLattice { span_h } => i as f64 * span_h,
        DistributionSpec::SymmetricStable { .. } => f64::NAN,
    }
}

/// Runs the convolution for `n` steps and calls `observe(step, table)`
/// after each step (including step 0).
fn convolve(spec: &DistributionSpec, n: u64, mut observe: impl FnMut(u64, &LatticeTable)) -> Result<LatticeTable> {
    spec.validate()?;
    let moves = lattice_moves(spec)?;
    if n > MAX_EXACT_STEPS {
        return Err(invalid(format!("exact convolution is limited to {MAX_EXACT_STEPS} steps, got {n}")));
    }
    let r = n as i64;
    let two_d = moves.iter().any(|m| m.1 != 0);
    let mut cur = LatticeTable::new(r);
    let mut next = LatticeTable::new(r);
    let origin = cur.idx(0, 0);
    cur.probs[origin] = 1.0;
    observe(0, &cur);
    for step in 1..=r {
        // Reachable states satisfy |i| + |j| <= step and i + j = step (mod 2).
        for i in -step..=step {
            let jr = if two_d { step - i.abs() } else { 0 };
            let mut j = -jr;
            while j <= jr {
                if (i + j - step).rem_euclid(2) == 0 {
                    let mut p = 0.0;
                    for &(di, dj, w) in &moves {
                        p += w * cur.get(i - di, j - dj);
                    }
                    let k = next.idx(i, j);
                    next.probs[k] = p;
                }
                j += 1;
            }
        }
        // Clear states of the previous parity so the swap leaves no stale mass.
        for v in cur.probs.iter_mut() {
            *v = 0.0;
        }
        std::mem::swap(&mut cur, &mut next);
        observe(step as u64, &cur);
    }
    Ok(cur)
}

/// Exact law of `S_n` for a finite-support family, by dynamic-programming
/// convolution over lattice coordinates (never over floating values).
pub fn exact_sum_law(spec: &DistributionSpec, n: u64) -> Result<AtomLaw> {
    let table = convolve(spec, n, |_, _| {})?;
    let r = table.radius;
    let mut atoms = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            let p = table.get(i, j);
            if p > 0.0 {
                atoms.push(Atom { value: lattice_value(spec, i, j), prob: p });
            }
        }
    }
    Ok(AtomLaw::new(atoms))
}

/// Exact `P(S_n = i u + j v)` in lattice coordinates: `u = 1, v = a` for
/// the four-point law, `u = h` (and `j = 0`) for the simple lattice.
pub fn lattice_atom_prob_at(spec: &DistributionSpec, n: u64, i: i64, j: i64) -> Result<f64> {
    let table = convolve(spec, n, |_, _| {})?;
    Ok(table.get(i, j))
}

/// `P(S_m = (i, j))` for every `m` in `0..=n_max`, from a single pass.
pub fn atom_prob_profile(spec: &DistributionSpec, n_max: u64, i: i64, j: i64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    convolve(spec, n_max, |_, t| out.push(t.get(i, j)))?;
    Ok(out)
}

/// Lattice coordinates of `point`, if it is reachable in `n` steps.
pub fn resolve_lattice_point(spec: &DistributionSpec, n: u64, point: f64) -> Result<Option<(i64, i64)>> {
    spec.validate()?;
    let tol = 1e-9 * point.abs().max(1.0);
    let n = n as i64;
    match *spec {
        DistributionSpec::SimpleLattice { span_h } => {
            let i = (point / span_h).round() as i64;
            let ok = (i as f64 * span_h - point).abs() <= tol && i.abs() <= n && (i - n).rem_euclid(2) == 0;
            Ok(ok.then_some((i, 0)))
        }
        DistributionSpec::FourPoint { a_param } => {
            for j in -n..=n {
                let i = (point - j as f64 * a_param).round() as i64;
                if (i as f64 + j as f64 * a_param - point).abs() <= tol
                    && i.abs() + j.abs() <= n
                    && (i + j - n).rem_euclid(2) == 0
                {
                    return Ok(Some((i, j)));
                }
            }
            Ok(None)
        }
        DistributionSpec::SymmetricStable { .. } => Err(Error::Unsupported("stable laws have no atoms".into())),
    }
}

/// Exact `P(S_n = point)` for a finite-support walk. Points off the
/// reachable lattice have probability zero.
pub fn lattice_atom_prob(spec: &DistributionSpec, n: u64, point: f64) -> Result<f64> {
    lattice_moves(spec)?;
    match resolve_lattice_point(spec, n, point)? {
        Some((i, j)) => lattice_atom_prob_at(spec, n, i, j),
        None => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use std::f64::consts::SQRT_2;

    #[test]
    fn rejects_bad_parameters() {
        assert!(DistributionSpec::symmetric_stable(2.5, 1.0).is_err());
        assert!(DistributionSpec::symmetric_stable(0.0, 1.0).is_err());
        assert!(DistributionSpec::symmetric_stable(1.5, -1.0).is_err());
        assert!(DistributionSpec::four_point(0.0).is_err());
        assert!(DistributionSpec::simple_lattice(-1.0).is_err());
        let bad = DistributionSpec::SymmetricStable { alpha: 2.1, scale_c: 1.0 };
        assert!(sample(&bad, 4, &mut stream(1, 0)).is_err());
    }

    #[test]
    fn lattice_draws_stay_on_support() {
        let spec = DistributionSpec::simple_lattice(1.0).unwrap();
        let xs = sample(&spec, 4, &mut stream(3, 0)).unwrap();
        assert!(xs.iter().all(|&x| x == 1.0 || x == -1.0));
    }

    #[test]
    fn charfn_examples() {
        let fp = DistributionSpec::four_point(SQRT_2).unwrap();
        assert_eq!(charfn(&fp, 0.0), 1.0);
        let expect = (-1.0 + (SQRT_2 * PI).cos()) / 2.0;
        assert!((charfn(&fp, PI) - expect).abs() < 1e-15);
        assert!((charfn(&fp, PI) + 0.633).abs() < 1e-3);
        let c = DistributionSpec::cauchy();
        assert!((charfn(&c, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        let lat = DistributionSpec::simple_lattice(0.5).unwrap();
        assert!((charfn(&lat, 1.3) - (0.65f64).cos()).abs() < 1e-15);
    }

    #[test]
    fn cramer_lattice_fails_at_two_pi() {
        let lat = DistributionSpec::simple_lattice(1.0).unwrap();
        let r = cramer_margin(&lat, 1.0, 100.0, 1000).unwrap();
        assert_eq!(r.verdict, CramerVerdict::FailsCramer);
        assert_eq!(r.sup_abs_phi, 1.0);
        assert!((r.argmax_t - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cramer_gaussian_satisfied() {
        let r = cramer_margin(&DistributionSpec::gaussian(), 5.0, 50.0, 1000).unwrap();
        assert_eq!(r.verdict, CramerVerdict::SatisfiesCramer);
        assert!(r.sup_abs_phi <= (-12.5f64).exp() * (1.0 + 1e-12));
        assert!(r.theta_estimate + r.epsilon0 < 1.0);
    }

    #[test]
    fn cramer_rejects_reversed_band() {
        assert!(cramer_margin(&DistributionSpec::gaussian(), 5.0, 5.0, 10).is_err());
        assert!(cramer_margin(&DistributionSpec::gaussian(), 1.0, 5.0, 1).is_err());
    }

    #[test]
    fn atom_probs_small_cases() {
        let fp = DistributionSpec::four_point(SQRT_2).unwrap();
        assert!((lattice_atom_prob(&fp, 2, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((lattice_atom_prob(&fp, 2, 1.0 + SQRT_2).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(lattice_atom_prob(&fp, 2, 0.3).unwrap(), 0.0);
        let lat = DistributionSpec::simple_lattice(1.0).unwrap();
        assert!((lattice_atom_prob(&lat, 2, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lattice_atom_prob(&lat, 3, 0.0).unwrap(), 0.0);
        assert!(lattice_atom_prob(&DistributionSpec::gaussian(), 2, 0.0).is_err());
    }

    #[test]
    fn exact_law_is_normalised() {
        for spec in [DistributionSpec::four_point(SQRT_2).unwrap(), DistributionSpec::simple_lattice(1.0).unwrap()] {
            for n in [0, 1, 2, 7, 40] {
                let law = exact_sum_law(&spec, n).unwrap();
                assert!((law.total_mass() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn profile_matches_single_queries() {
        let fp = DistributionSpec::four_point(SQRT_2).unwrap();
        let prof = atom_prob_profile(&fp, 12, 0, 0).unwrap();
        for n in [0u64, 1, 4, 12] {
            assert_eq!(prof[n as usize], lattice_atom_prob_at(&fp, n, 0, 0).unwrap());
        }
    }
}
