use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::engine::{EngineConfig, SimulationRun};
use super::window::WindowSpec;
use crate::error::{invalid, Error, Result};

/// Per-trajectory, per-block statistics. Field names are the JSON Lines
/// wire format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockReport {
    pub traj: u64,
    pub k: u32,
    /// Hit counts aligned with the configured windows.
    pub hits: Vec<u64>,
    /// First hit index per window, -1 for none.
    pub first_hit: Vec<i64>,
    /// Minimum of `g_n |S_n|` over the block.
    pub min_gs: f64,
    /// `S_n` at the last index of the block.
    pub s_end: f64,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub run_id: String,
    pub config: EngineConfig,
    pub master_seed: u64,
    pub generator: String,
    pub version: String,
}

impl RunHeader {
    pub fn new(cfg: &EngineConfig) -> Self {
        Self {
            run_id: cfg.hash(),
            config: cfg.clone(),
            master_seed: cfg.master_seed,
            generator: "ChaCha8 (rand_chacha 0.9), seed_from_u64(master_seed), stream = trajectory id".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    run: RunHeader,
}

/// Writes the header line followed by one line per report.
pub fn write_jsonl<W: Write>(run: &SimulationRun, mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, &HeaderLine { run: run.header.clone() })?;
    out.write_all(b"\n")?;
    for r in &run.reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<SimulationRun> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| invalid("empty report stream"))??;
    let header: HeaderLine = serde_json::from_str(&first)?;
    let mut reports = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        reports.push(serde_json::from_str(&line)?);
    }
    Ok(SimulationRun { header: header.run, reports })
}

/// Cumulative minimum of `g_n |S_n|` at each block boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinProfile {
    pub traj: u64,
    /// `(k, min over scored blocks up to and including k)`.
    pub points: Vec<(u32, f64)>,
}

impl MinProfile {
    pub fn final_value(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }

    pub fn at_block(&self, k: u32) -> Option<f64> {
        self.points.iter().find(|p| p.0 == k).map(|p| p.1)
    }
}

/// Accumulates reports belonging to one run.
#[derive(Debug, Clone)]
pub struct MinProfileBuilder {
    run_id: String,
    per_traj: BTreeMap<u64, Vec<(u32, f64)>>,
}

impl MinProfileBuilder {
    pub fn new(run_id: impl Into<String>) -> Self {
        Self { run_id: run_id.into(), per_traj: BTreeMap::new() }
    }

    pub fn push(&mut self, run_id: &str, report: &BlockReport) -> Result<()> {
        if run_id != self.run_id {
            return Err(Error::RunMismatch { expected: self.run_id.clone(), found: run_id.to_string() });
        }
        let pts = self.per_traj.entry(report.traj).or_default();
        if pts.last().is_some_and(|&(k, _)| k >= report.k) {
            return Err(invalid(format!("blocks out of order for trajectory {}", report.traj)));
        }
        let prev = pts.last().map_or(f64::INFINITY, |p| p.1);
        pts.push((report.k, prev.min(report.min_gs)));
        Ok(())
    }

    pub fn finish(self) -> Vec<MinProfile> {
        self.per_traj.into_iter().map(|(traj, points)| MinProfile { traj, points }).collect()
    }
}

/// Profiles for every trajectory of a run.
pub fn running_min_profile(run: &SimulationRun) -> Result<Vec<MinProfile>> {
    let mut b = MinProfileBuilder::new(run.header.run_id.clone());
    for r in &run.reports {
        b.push(&run.header.run_id, r)?;
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerdictThresholds {
    /// Number of final blocks inspected.
    pub late_blocks: u32,
    /// Recurrent when every late block has at least this fraction of
    /// trajectories with a hit.
    pub recurrent_fraction: f64,
    /// Transient when every late block has at most this fraction.
    pub transient_fraction: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        Self { late_blocks: 3, recurrent_fraction: 0.25, transient_fraction: 0.10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowVerdict {
    Recurrent,
    Transient,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowEvidence {
    pub window: WindowSpec,
    pub verdict: WindowVerdict,
    /// `(k, fraction of trajectories with at least one hit)` per late block.
    pub hit_fraction: Vec<(u32, f64)>,
    /// `(k, mean hits per trajectory)` per scored block.
    pub mean_hits: Vec<(u32, f64)>,
}

/// Empirical picture of `K(gS)` for the configured windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulationReport {
    pub run_id: String,
    pub thresholds: VerdictThresholds,
    pub windows: Vec<WindowEvidence>,
    /// `+-infinity` always belong to the accumulation set of a symmetric
    /// walk rescaled by a positive nondecreasing sequence.
    pub includes_infinity: bool,
}

pub fn accumulation_report(run: &SimulationRun, thresholds: VerdictThresholds) -> AccumulationReport {
    let cfg = &run.header.config;
    let mut by_block: BTreeMap<u32, Vec<&BlockReport>> = BTreeMap::new();
    for r in &run.reports {
        if r.k >= cfg.burn_in_blocks {
            by_block.entry(r.k).or_default().push(r);
        }
    }
    let blocks: Vec<u32> = by_block.keys().copied().collect();
    let late: Vec<u32> = blocks.iter().rev().take(thresholds.late_blocks as usize).rev().copied().collect();
    let windows = cfg
        .windows
        .iter()
        .enumerate()
        .map(|(w, window)| {
            let stats = |k: u32| {
                let rs = &by_block[&k];
                let n = rs.len().max(1) as f64;
                let with_hit = rs.iter().filter(|r| r.hits[w] > 0).count() as f64;
                let total: u64 = rs.iter().map(|r| r.hits[w]).sum();
                (with_hit / n, total as f64 / n)
            };
            let hit_fraction: Vec<(u32, f64)> = late.iter().map(|&k| (k, stats(k).0)).collect();
            let mean_hits = blocks.iter().map(|&k| (k, stats(k).1)).collect();
            let verdict = if hit_fraction.is_empty() {
                WindowVerdict::Inconclusive
            } else if hit_fraction.iter().all(|&(_, f)| f >= thresholds.recurrent_fraction) {
                WindowVerdict::Recurrent
            } else if hit_fraction.iter().all(|&(_, f)| f <= thresholds.transient_fraction) {
                WindowVerdict::Transient
            } else {
                WindowVerdict::Inconclusive
            };
            WindowEvidence { window: *window, verdict, hit_fraction, mean_hits }
        })
        .collect();
    AccumulationReport { run_id: run.header.run_id.clone(), thresholds, windows, includes_infinity: true }
}
