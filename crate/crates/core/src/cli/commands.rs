use std::fmt::Write as _;
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{CoverageSource, ExperimentConfig, QuantileSource};
use super::return_probs::remark3_table;
use super::{write_summary, Command, ConstructKind, Status, VerifyKind};
use crate::charfn_analysis::{
    certify_nonnegative, llt_sandwich_check, smoothed_window_mass, smoothed_window_mass_direct, InversionConfig,
    ProbeLaw,
};
use crate::constructions::{
    construct_recurrent_growth, construct_transient_growth, validate_recurrent_growth, validate_transient_growth,
    CoverageOracle, DeterministicOracle, MonteCarloQuantiles, QuantileOracle, StableWalkQuantiles, StopReason,
    UniformQuantiles, WalkCoverageOracle,
};
use crate::criteria::{
    check_correlation_condition, dichotomy_probe, kochen_stone_lower_bound, predict_k, theorem1_classify,
    EstimatorConfig, PredictedSet, Verdict,
};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::walk_engine::{
    accumulation_report, estimate_window_probs, llt_block_mean, simulate_blocks, write_jsonl, EngineConfig, Limit,
    WindowSpec, WindowVerdict,
};

const HOLDOUT_STREAM: u64 = 0x686f_6c64;

pub(super) fn dispatch(
    command: &Command,
    cfg: &ExperimentConfig,
    out: &Path,
    threads: Option<usize>,
) -> Result<Status> {
    match command {
        Command::Predict => predict(cfg, out),
        Command::Simulate => simulate(cfg, out, threads),
        Command::Probs => probs(cfg, out),
        Command::Construct { which: ConstructKind::Recurrent } => construct_recurrent(cfg, out),
        Command::Construct { which: ConstructKind::Transient } => construct_transient(cfg, out),
        Command::Verify { kind: VerifyKind::Dominance } => verify_dominance(cfg, out),
        Command::Verify { kind: VerifyKind::Llt } => verify_llt(cfg, out),
        Command::Verify { kind: VerifyKind::Dichotomy } => verify_dichotomy(cfg, out),
        Command::Verify { kind: VerifyKind::KochenStone } => verify_kochen_stone(cfg, out),
        Command::Remark3 { n_max } => remark3(cfg, out, n_max.unwrap_or(cfg.remark3.n_max)),
    }
}

fn predict(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let p = predict_k(&cfg.spec, &cfg.growth)?;
    let status = match p.set {
        PredictedSet::Refused { .. } | PredictedSet::Undetermined => Status::Undetermined,
        _ => Status::Pass,
    };
    println!("predicted K(gS): {}", serde_json::to_string(&p.set)?);
    println!("rationale: {}", p.rationale);
    write_summary(out, "predict", cfg, status, &p)?;
    Ok(status)
}

/// The verdict the predicted accumulation set implies for one window.
pub fn expected_window_verdict(set: &PredictedSet, window: &WindowSpec) -> Option<WindowVerdict> {
    match *set {
        PredictedSet::FullExtendedLine => Some(WindowVerdict::Recurrent),
        PredictedSet::OnlyInfinities | PredictedSet::TransientAlphaLessOne => Some(WindowVerdict::Transient),
        PredictedSet::LatticeSet { span, lim_g } => {
            let (lo, hi) = window.bounds();
            let hit = match lim_g {
                Limit::Infinite => lo < 0.0 && hi > 0.0,
                Limit::Finite(g) => {
                    let step = span * g;
                    let k = (lo / step).floor() + 1.0;
                    k * step < hi
                }
            };
            Some(if hit { WindowVerdict::Recurrent } else { WindowVerdict::Transient })
        }
        PredictedSet::Refused { .. } | PredictedSet::Undetermined => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SimulateResult {
    run_id: String,
    prediction: crate::criteria::KPrediction,
    accumulation: crate::walk_engine::AccumulationReport,
    expected: Vec<Option<WindowVerdict>>,
    contradictions: Vec<usize>,
}

fn simulate(cfg: &ExperimentConfig, out: &Path, threads: Option<usize>) -> Result<Status> {
    let engine = EngineConfig {
        spec: cfg.spec,
        growth: cfg.growth.clone(),
        windows: cfg.windows.clone(),
        max_exponent: cfg.simulate.max_exponent,
        n_trajectories: cfg.simulate.n_trajectories,
        master_seed: cfg.master_seed,
        burn_in_blocks: cfg.simulate.burn_in_blocks,
    };
    let run = simulate_blocks(&engine, threads)?;
    write_jsonl(&run, BufWriter::new(std::fs::File::create(out.join("blocks.jsonl"))?))?;
    let accumulation = accumulation_report(&run, cfg.simulate.thresholds);
    let prediction = predict_k(&cfg.spec, &cfg.growth)?;
    let expected: Vec<_> = cfg.windows.iter().map(|w| expected_window_verdict(&prediction.set, w)).collect();
    let contradictions: Vec<usize> = accumulation
        .windows
        .iter()
        .zip(&expected)
        .enumerate()
        .filter(|(_, (ev, exp))| match exp {
            Some(e) => ev.verdict != WindowVerdict::Inconclusive && ev.verdict != *e,
            None => false,
        })
        .map(|(i, _)| i)
        .collect();

    let mut csv = String::from("k,window,mean_hits,ci_half_width,predicted_mean\n");
    let n_traj = cfg.simulate.n_trajectories as f64;
    for (w, window) in cfg.windows.iter().enumerate() {
        for k in cfg.simulate.burn_in_blocks..cfg.simulate.max_exponent {
            let hits: Vec<f64> = run.reports.iter().filter(|r| r.k == k).map(|r| r.hits[w] as f64).collect();
            if hits.is_empty() {
                continue;
            }
            let m = hits.iter().sum::<f64>() / hits.len() as f64;
            let var = hits.iter().map(|h| (h - m).powi(2)).sum::<f64>() / (hits.len().max(2) - 1) as f64;
            let ci = 1.96 * (var / n_traj).sqrt();
            let predicted = llt_block_mean(&cfg.spec, &cfg.growth, window, k);
            writeln!(csv, "{k},{w},{m},{ci},{predicted}").expect("string write");
        }
    }
    std::fs::write(out.join("plot.csv"), csv)?;

    for (w, ev) in accumulation.windows.iter().enumerate() {
        println!("window {w} {:?}: {:?} (expected {:?})", ev.window, ev.verdict, expected[w]);
    }
    let status = if contradictions.is_empty() { Status::Pass } else { Status::Fail };
    let result =
        SimulateResult { run_id: run.header.run_id.clone(), prediction, accumulation, expected, contradictions };
    write_summary(out, "simulate", cfg, status, &result)?;
    Ok(status)
}

fn probs(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let mut csv = String::from("window,n,p_hat,ci_half_width\n");
    let mut results = Vec::new();
    let mut status = Status::Pass;
    for (w, window) in cfg.windows.iter().enumerate() {
        let est = estimate_window_probs(
            &cfg.spec,
            &cfg.growth,
            window,
            &cfg.probs.n_grid,
            cfg.probs.samples_per_n,
            derive_seed(cfg.master_seed, w as u64),
            cfg.probs.mode,
        )?;
        for p in &est.points {
            writeln!(csv, "{w},{},{},{}", p.n, p.p_hat, p.ci_half_width).expect("string write");
        }
        let verdict = match window {
            WindowSpec::Symmetric { .. } => {
                let v = theorem1_classify(&est)?;
                println!("window {w}: {:?}, {}", v.series.verdict, v.conclusion);
                if v.series.verdict == Verdict::Undetermined {
                    status = status.worst(Status::Undetermined);
                }
                Some(v)
            }
            WindowSpec::Interval { .. } => None,
        };
        results.push(serde_json::json!({ "estimates": est, "classification": verdict }));
    }
    std::fs::write(out.join("probs.csv"), csv)?;
    write_summary(out, "probs", cfg, status, &results)?;
    Ok(status)
}

fn construct_recurrent(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let p = &cfg.construct;
    let mut walk;
    let mut harmonic = DeterministicOracle::new(|n| 1.0 / n as f64);
    let oracle: &mut dyn CoverageOracle = match p.coverage {
        CoverageSource::Walk => {
            walk = WalkCoverageOracle::new(&cfg.spec, p.oracle_paths, cfg.master_seed)?;
            &mut walk
        }
        CoverageSource::Harmonic => &mut harmonic,
    };
    let built = construct_recurrent_growth(oracle, p.j_max, p.n_cap)?;
    let validation = match p.coverage {
        CoverageSource::Walk if !built.breakpoints.is_empty() => {
            let levels = built.breakpoints.len() as f64;
            Some(validate_recurrent_growth(
                &cfg.spec,
                &built.breakpoints,
                2.0 / levels.sqrt(),
                p.holdout_paths,
                derive_seed(cfg.master_seed, HOLDOUT_STREAM),
            )?)
        }
        _ => None,
    };
    let mut status = if built.stop == StopReason::Completed { Status::Pass } else { Status::Undetermined };
    if validation.is_some_and(|v| v.fraction < p.holdout_fraction) {
        status = Status::Fail;
    }
    println!("breakpoints: {:?} ({:?})", built.breakpoints, built.stop);
    if let Some(v) = &validation {
        println!("held-out: {}/{} paths reach the threshold", v.successes, v.paths);
    }
    let result = serde_json::json!({ "construction": built, "validation": validation });
    write_summary(out, "construct_recurrent", cfg, status, &result)?;
    Ok(status)
}

fn construct_transient(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let p = &cfg.construct;
    let mut oracle: Box<dyn QuantileOracle> = match p.quantiles {
        QuantileSource::Analytic => Box::new(StableWalkQuantiles::new(&cfg.spec)?),
        QuantileSource::Uniform => Box::new(UniformQuantiles),
        QuantileSource::MonteCarlo => {
            Box::new(MonteCarloQuantiles::new(&cfg.spec, p.samples_per_mass, cfg.master_seed)?)
        }
    };
    let built = construct_transient_growth(oracle.as_mut(), p.n_max)?;
    let validation = match p.quantiles {
        QuantileSource::Uniform => None,
        _ => Some(validate_transient_growth(
            &cfg.spec,
            &built.growth,
            (p.n_max / 2).max(1),
            p.n_max,
            p.validation_level,
            p.holdout_paths,
            derive_seed(cfg.master_seed, HOLDOUT_STREAM),
        )?),
    };
    let mut status = if built.bound_sum.is_finite() { Status::Pass } else { Status::Fail };
    if validation.is_some_and(|v| v.fraction < p.holdout_fraction) {
        status = Status::Fail;
    }
    println!("g_{} = {:e}, bound sum {}", p.n_max, built.growth.value(p.n_max), built.bound_sum);
    if let Some(v) = &validation {
        println!("held-out: {}/{} paths stay above {}", v.successes, v.paths, p.validation_level);
    }
    let result = serde_json::json!({ "construction": built, "validation": validation });
    write_summary(out, "construct_transient", cfg, status, &result)?;
    Ok(status)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceLawReport {
    pub label: String,
    pub exact: bool,
    pub max_ratio: f64,
    pub argmax: (f64, f64),
    pub tolerance: f64,
    pub a_zero: f64,
    /// Largest `A(x) - A(0)` on the grid.
    pub max_excess: f64,
    pub slack: f64,
    /// The chain `P(|X|<1) >= A(0) >= A(x) >= P([x-1/2, x+1/2])/2` on the grid.
    pub chain_holds: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub laws: Vec<DominanceLawReport>,
    pub pass: bool,
}

/// Dominance ratios and the global maximum of `A` on an `x` grid for the
/// configured spec: `S_n` for each configured `n` when the support is
/// finite, the step law itself otherwise.
pub fn dominance_report(cfg: &ExperimentConfig) -> Result<DominanceReport> {
    let d = &cfg.dominance;
    let laws: Vec<(String, ProbeLaw)> = if cfg.spec.has_finite_support() {
        d.sum_steps.iter().map(|&n| Ok((format!("S_{n}"), ProbeLaw::sum_of(&cfg.spec, n)?))).collect::<Result<_>>()?
    } else {
        vec![("X".to_string(), ProbeLaw::from_spec(&cfg.spec)?)]
    };
    let grid: Vec<f64> =
        (0..d.grid_points).map(|i| -d.x_max + 2.0 * d.x_max * i as f64 / (d.grid_points.max(2) - 1) as f64).collect();
    let mut reports = Vec::new();
    for (label, law) in laws {
        let exact = matches!(law, ProbeLaw::Atoms(_));
        certify_nonnegative(&law, &InversionConfig::for_law(&law, d.x_max))?;
        let tolerance = if exact { 1e-9 } else { 1e-6 };
        let mut max_ratio = 0.0f64;
        let mut argmax = (0.0, 0.0);
        for &delta in &d.deltas {
            for &x in &grid {
                let r = crate::charfn_analysis::dominance_ratio(&law, x, delta)?;
                if r > max_ratio {
                    max_ratio = r;
                    argmax = (x, delta);
                }
            }
        }
        let a = |x: f64| -> Result<(f64, f64)> {
            if exact {
                Ok((smoothed_window_mass_direct(&law, x), 1e-12))
            } else {
                let c = InversionConfig::for_law(&law, x);
                Ok((smoothed_window_mass(&law, x, &c)?, c.tail_bound + 1e-8))
            }
        };
        let (a_zero, slack0) = a(0.0)?;
        let open_unit = law.interval_mass(-1.0, 1.0, false);
        let mut max_excess = f64::NEG_INFINITY;
        let mut slack = slack0;
        let mut chain_holds = open_unit + slack0 >= a_zero;
        for &x in &grid {
            let (ax, s) = a(x)?;
            max_excess = max_excess.max(ax - a_zero);
            slack = slack.max(slack0 + s);
            let half = 0.5 * law.interval_mass(x - 0.5, x + 0.5, true);
            chain_holds &= ax + s >= half;
        }
        let pass = max_ratio <= 4.0 + tolerance && max_excess <= slack && chain_holds;
        reports.push(DominanceLawReport {
            label,
            exact,
            max_ratio,
            argmax,
            tolerance,
            a_zero,
            max_excess,
            slack,
            chain_holds,
            pass,
        });
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(DominanceReport { laws: reports, pass })
}

fn verify_dominance(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let report = match dominance_report(cfg) {
        Err(Error::NegativeCharfn(msg)) => {
            println!("characteristic function is negative: {msg}");
            write_summary(out, "verify_dominance", cfg, Status::Fail, &msg)?;
            return Ok(Status::Fail);
        }
        r => r?,
    };
    for l in &report.laws {
        println!(
            "{}: max ratio {:.6} at (x, delta) = {:?}, A(0) = {:.6}, pass = {}",
            l.label, l.max_ratio, l.argmax, l.a_zero, l.pass
        );
    }
    let status = if report.pass { Status::Pass } else { Status::Fail };
    write_summary(out, "verify_dominance", cfg, status, &report)?;
    Ok(status)
}

fn verify_llt(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let l = &cfg.llt;
    let check = llt_sandwich_check(&cfg.spec, l.n, l.interval, l.samples, l.sandwich(), cfg.master_seed)?;
    println!(
        "empirical density {:.5} vs f(0) = {:.5} (band factor {}): pass = {}",
        check.empirical_density, check.f0, check.c_factor, check.pass
    );
    let status = if check.pass { Status::Pass } else { Status::Fail };
    write_summary(out, "verify_llt", cfg, status, &check)?;
    Ok(status)
}

fn verify_dichotomy(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let d = &cfg.dichotomy;
    let est = EstimatorConfig {
        n_grid: d.n_grid.clone(),
        samples_per_n: d.samples_per_n,
        seed: cfg.master_seed,
        mode: d.mode,
    };
    let report = dichotomy_probe(&cfg.spec, &cfg.growth, &d.m_list, &est)?;
    for v in &report.verdicts {
        println!("M = {}: {:?} (exponent {:?})", v.m, v.series.verdict, v.series.exponent);
    }
    let status = if !report.consistent {
        Status::Fail
    } else if report.verdicts.iter().all(|v| v.series.verdict == Verdict::Undetermined) {
        Status::Undetermined
    } else {
        Status::Pass
    };
    write_summary(out, "verify_dichotomy", cfg, status, &report)?;
    Ok(status)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KochenStoneReport {
    pub n: usize,
    /// Independent events with `P(A_k) = 1/k`.
    pub independent_bound: f64,
    pub independent_closed_form: f64,
    /// Nested events `A_k = {U < 1/k}`.
    pub nested_bound: f64,
    pub nested_closed_form: f64,
    pub independent_condition_holds: bool,
    pub pass: bool,
}

pub fn kochen_stone_report(n: usize) -> Result<KochenStoneReport> {
    let p: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
    let indep = |j: usize, k: usize| if j == k { 1.0 / j as f64 } else { 1.0 / (j as f64 * k as f64) };
    let nested = |j: usize, k: usize| 1.0 / j.max(k) as f64;
    let independent_bound = kochen_stone_lower_bound(&p, indep, n)?;
    let nested_bound = kochen_stone_lower_bound(&p, nested, n)?;
    let h: f64 = p.iter().rev().sum();
    let h2: f64 = p.iter().rev().map(|x| x * x).sum();
    let independent_closed_form = h * h / (h * h - h2 + h);
    let nested_closed_form = h * h / (2.0 * n as f64 - h);
    let cond = check_correlation_condition(indep, &p, 1.0, 1, n.min(2000))?;
    let pass = (independent_bound - independent_closed_form).abs() <= 1e-6
        && (nested_bound - nested_closed_form).abs() <= 1e-6
        && cond.holds();
    Ok(KochenStoneReport {
        n,
        independent_bound,
        independent_closed_form,
        nested_bound,
        nested_closed_form,
        independent_condition_holds: cond.holds(),
        pass,
    })
}

fn verify_kochen_stone(cfg: &ExperimentConfig, out: &Path) -> Result<Status> {
    let r = kochen_stone_report(cfg.kochen_stone.n)?;
    println!("independent: {:.6} (closed form {:.6})", r.independent_bound, r.independent_closed_form);
    println!("nested:      {:.6} (closed form {:.6})", r.nested_bound, r.nested_closed_form);
    let status = if r.pass { Status::Pass } else { Status::Fail };
    write_summary(out, "verify_kochen_stone", cfg, status, &r)?;
    Ok(status)
}

fn remark3(cfg: &ExperimentConfig, out: &Path, n_max: u64) -> Result<Status> {
    let r = &cfg.remark3;
    let table = remark3_table(n_max, r.identity_check_max.min(n_max), r.dp_check_max.min(n_max))?;
    let mut csv = String::from("n,p_return,pi_n_p,partial_sum,log_reference\n");
    for row in &table.rows {
        writeln!(csv, "{},{:e},{},{},{}", row.n, row.p_return, row.pi_n_p, row.partial_sum, row.log_reference)
            .expect("string write");
    }
    std::fs::write(out.join("remark3.csv"), csv)?;
    let last = table.rows.last().expect("n_max >= 1");
    println!(
        "n = {}: P(S_2n = 0) = {:e}, pi n P = {:.6}, partial sum {:.6} (ln n / pi = {:.6})",
        last.n, last.p_return, last.pi_n_p, last.partial_sum, last.log_reference
    );
    let status = if table.identity_holds && table.dp_max_rel_error < 1e-12 { Status::Pass } else { Status::Fail };
    write_summary(out, "remark3", cfg, status, &table)?;
    Ok(status)
}
