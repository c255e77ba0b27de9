use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::growth::GrowthSequence;
use super::report::{BlockReport, RunHeader};
use super::window::WindowSpec;
use crate::distributions::{DistributionSpec, StepSampler};
use crate::error::{invalid, Result};
use crate::numeric::KahanSum;
use crate::rng::{stream, StreamRng};

pub const MAX_EXPONENT: u32 = 40;
pub const DEFAULT_BURN_IN_BLOCKS: u32 = 6;

/// Steps processed per trajectory between synchronisation points.
const CHUNK: u64 = 1 << 15;

/// Magnitude past which a partial sum is treated as overflowed.
const OVERFLOW_LIMIT: f64 = 1e300;

fn default_burn_in() -> u32 {
    DEFAULT_BURN_IN_BLOCKS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub spec: DistributionSpec,
    pub growth: GrowthSequence,
    pub windows: Vec<WindowSpec>,
    /// Blocks `k < max_exponent` are simulated, i.e. `n < 2^max_exponent`.
    pub max_exponent: u32,
    pub n_trajectories: u64,
    pub master_seed: u64,
    /// Blocks below this index are simulated but not reported.
    #[serde(default = "default_burn_in")]
    pub burn_in_blocks: u32,
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.growth.validate()?;
        if self.windows.is_empty() {
            return Err(invalid("at least one window is required"));
        }
        for w in &self.windows {
            w.validate()?;
        }
        if self.max_exponent > MAX_EXPONENT {
            return Err(invalid(format!("max_exponent must be at most {MAX_EXPONENT}")));
        }
        if self.max_exponent <= self.burn_in_blocks {
            return Err(invalid(format!(
                "max_exponent ({}) must exceed the burn-in ({})",
                self.max_exponent, self.burn_in_blocks
            )));
        }
        if self.n_trajectories == 0 {
            return Err(invalid("n_trajectories must be positive"));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&canonical))
    }
}

/// Output of one engine run: header plus reports ordered by
/// `(trajectory, block)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub header: RunHeader,
    pub reports: Vec<BlockReport>,
}

struct Trajectory {
    id: u64,
    rng: StreamRng,
    sum: KahanSum,
    hits: Vec<u64>,
    first_hit: Vec<i64>,
    min_gs: f64,
    overflowed: bool,
    finished: bool,
    reports: Vec<BlockReport>,
}

impl Trajectory {
    fn new(id: u64, seed: u64, windows: usize) -> Self {
        Self {
            id,
            rng: stream(seed, id),
            sum: KahanSum::default(),
            hits: vec![0; windows],
            first_hit: vec![-1; windows],
            min_gs: f64::INFINITY,
            overflowed: false,
            finished: false,
            reports: Vec::new(),
        }
    }

    #[inline]
    fn advance(&mut self, sampler: &StepSampler, windows: &[WindowSpec], first_n: u64, g: &[f64]) {
        if self.finished || self.overflowed {
            return;
        }
        for (offset, &gn) in g.iter().enumerate() {
            let x = sampler.sample(&mut self.rng);
            let prev = self.sum;
            self.sum.add(x);
            let s = self.sum.value();
            if !(s.abs() <= OVERFLOW_LIMIT) {
                self.sum = prev;
                self.overflowed = true;
                return;
            }
            let v = gn * s;
            let av = v.abs();
            if av < self.min_gs {
                self.min_gs = av;
            }
            for (w, win) in windows.iter().enumerate() {
                if win.contains(v) {
                    self.hits[w] += 1;
                    if self.first_hit[w] < 0 {
                        self.first_hit[w] = (first_n + offset as u64) as i64;
                    }
                }
            }
        }
    }

    fn close_block(&mut self, k: u32, burn_in: u32) {
        if self.finished {
            return;
        }
        if k >= burn_in || self.overflowed {
            let mut flags = Vec::new();
            if self.overflowed {
                flags.push("overflow".to_string());
            }
            self.reports.push(BlockReport {
                traj: self.id,
                k,
                hits: self.hits.clone(),
                first_hit: self.first_hit.clone(),
                min_gs: if self.min_gs.is_finite() { self.min_gs } else { f64::MAX },
                s_end: self.sum.value(),
                flags,
            });
        }
        if self.overflowed {
            self.finished = true;
        }
        self.hits.iter_mut().for_each(|h| *h = 0);
        self.first_hit.iter_mut().for_each(|f| *f = -1);
        self.min_gs = f64::INFINITY;
    }
}

/// Runs every trajectory through blocks `0..max_exponent` and returns the
/// reports for blocks `burn_in_blocks..max_exponent`.
///
/// Trajectory `i` draws from RNG stream `i` of `master_seed`, so output is
/// identical for any `threads` value. Memory is O(1) per trajectory plus
/// one shared table of `g_n` for the current chunk.
pub fn simulate_blocks(cfg: &EngineConfig, threads: Option<usize>) -> Result<SimulationRun> {
    cfg.validate()?;
    let sampler = StepSampler::new(&cfg.spec)?;
    let header = RunHeader::new(cfg);
    let run = || {
        let mut trajs: Vec<Trajectory> =
            (0..cfg.n_trajectories).map(|id| Trajectory::new(id, cfg.master_seed, cfg.windows.len())).collect();
        let mut g = vec![0.0; CHUNK as usize];
        for k in 0..cfg.max_exponent {
            let lo = 1u64 << k;
            let hi = lo << 1;
            let mut start = lo;
            while start < hi {
                let end = (start + CHUNK).min(hi);
                let table = &mut g[..(end - start) as usize];
                cfg.growth.fill(start, table);
                let table = &*table;
                trajs.par_iter_mut().for_each(|t| t.advance(&sampler, &cfg.windows, start, table));
                start = end;
            }
            trajs.par_iter_mut().for_each(|t| t.close_block(k, cfg.burn_in_blocks));
        }
        trajs.into_iter().flat_map(|t| t.reports).collect::<Vec<_>>()
    };
    let mut reports = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    reports.sort_by_key(|r| (r.traj, r.k));
    Ok(SimulationRun { header, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_cfg(traj: u64, max_exponent: u32, burn_in: u32) -> EngineConfig {
        EngineConfig {
            spec: DistributionSpec::simple_lattice(1.0).unwrap(),
            growth: GrowthSequence::constant(1.0).unwrap(),
            windows: vec![WindowSpec::symmetric(0.5).unwrap()],
            max_exponent,
            n_trajectories: traj,
            master_seed: 11,
            burn_in_blocks: burn_in,
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = lattice_cfg(1, 10, 6);
        c.windows.clear();
        assert!(simulate_blocks(&c, None).is_err());
        let mut c = lattice_cfg(1, 41, 6);
        c.max_exponent = 41;
        assert!(simulate_blocks(&c, None).is_err());
        assert!(simulate_blocks(&lattice_cfg(1, 6, 6), None).is_err());
        assert!(simulate_blocks(&lattice_cfg(0, 10, 6), None).is_err());
    }

    #[test]
    fn one_report_per_scored_block() {
        let run = simulate_blocks(&lattice_cfg(3, 10, 6), None).unwrap();
        assert_eq!(run.reports.len(), 3 * 4);
        for r in &run.reports {
            assert!(r.hits[0] <= 1u64 << r.k);
            assert!(r.min_gs >= 0.0);
            assert!(r.flags.is_empty());
        }
    }

    #[test]
    fn lattice_hits_are_zero_visits() {
        // With g = 1 and |.| < 0.5, a hit is exactly S_n = 0; first hits
        // sit at even times and s_end keeps the parity of 2^{k+1} - 1.
        let run = simulate_blocks(&lattice_cfg(4, 12, 0), None).unwrap();
        for r in &run.reports {
            if r.first_hit[0] >= 0 {
                assert_eq!(r.first_hit[0] % 2, 0);
            }
            assert_eq!(r.s_end.abs() as u64 % 2, 1);
            assert!(r.min_gs == 0.0 || r.hits[0] == 0);
        }
    }

    #[test]
    fn far_window_is_never_hit() {
        let mut c = lattice_cfg(2, 8, 6);
        c.spec = DistributionSpec::gaussian();
        c.windows = vec![WindowSpec::interval(1e9, 0.5).unwrap()];
        let run = simulate_blocks(&c, None).unwrap();
        assert!(run.reports.iter().all(|r| r.hits[0] == 0 && r.first_hit[0] == -1));
    }

    #[test]
    fn heavy_tails_overflow_is_flagged() {
        let mut c = lattice_cfg(4, 12, 6);
        c.spec = DistributionSpec::symmetric_stable(0.01, 1.0).unwrap();
        let run = simulate_blocks(&c, None).unwrap();
        let flagged: Vec<_> = run.reports.iter().filter(|r| !r.flags.is_empty()).collect();
        assert!(!flagged.is_empty());
        for f in flagged {
            assert_eq!(f.flags, vec!["overflow".to_string()]);
            assert!(f.s_end.is_finite());
            // nothing follows an overflow for that trajectory
            assert!(run.reports.iter().all(|r| r.traj != f.traj || r.k <= f.k));
        }
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut c = lattice_cfg(5, 12, 6);
        c.spec = DistributionSpec::cauchy();
        c.growth = GrowthSequence::power(0.3).unwrap();
        let a = simulate_blocks(&c, Some(1)).unwrap();
        let b = simulate_blocks(&c, Some(3)).unwrap();
        assert_eq!(a, b);
    }
}
