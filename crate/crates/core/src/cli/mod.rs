//! Batch experiment runner: `reclab <command> --config cfg.toml --out dir`.
//!
//! Every command writes a `<command>_summary.json` carrying the config
//! hash, master seed and resolved config. Exit codes: 0 pass or definite
//! verdict, 1 internal error, 2 undetermined or refused, 3 verification
//! failure.

mod commands;
mod config;
mod return_probs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use commands::{
    dominance_report, expected_window_verdict, kochen_stone_report, DominanceLawReport, DominanceReport,
    KochenStoneReport,
};
pub use config::{
    ConstructParams, CoverageSource, DichotomyParams, DominanceParams, ExperimentConfig, KochenStoneParams, LltParams,
    ProbsParams, QuantileSource, Remark3Params, SimulateParams,
};
pub use return_probs::{remark3_table, return_probability_exact, Remark3Row, Remark3Table, REMARK3_MAX_N};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "reclab", version, about = "Recurrence strength of rescaled random walks")]
pub struct Cli {
    /// TOML experiment config; omitted keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides `master_seed` from the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "reclab-out")]
    pub out: PathBuf,
    /// Worker threads; affects speed only.
    #[arg(long, global = true, env = "RECLAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict K(gS) from the series criteria.
    Predict,
    /// Stream walks over dyadic blocks and summarise window hits.
    Simulate,
    /// Estimate P(g_n S_n in window) on an n grid and classify the series.
    Probs,
    /// Build a growth sequence.
    Construct {
        #[arg(value_enum)]
        which: ConstructKind,
    },
    /// Check one of the supporting estimates.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
    },
    /// Exact return probabilities of the four-point walk.
    Remark3 {
        #[arg(long)]
        n_max: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Recurrent,
    Transient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Dominance,
    Llt,
    Dichotomy,
    KochenStone,
}

/// Outcome of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Undetermined,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Pass => 0,
            Self::Undetermined => 2,
            Self::Fail => 3,
        }
    }

    fn worst(self, other: Self) -> Self {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Pass,
        }
    }
}

/// Resolves the config named on the command line, applying `--seed`.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    Ok(cfg)
}

/// Runs one command and returns its status. Output files go to `cli.out`.
pub fn run(cli: &Cli) -> Result<Status> {
    let cfg = resolve_config(cli)?;
    std::fs::create_dir_all(&cli.out)?;
    let work = || commands::dispatch(&cli.command, &cfg, &cli.out, cli.threads);
    match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Unsupported(_) | Error::InsufficientPower(_) => 2,
        _ => 1,
    }
}

/// Entry point shared by the binary: parses arguments, runs, maps the
/// outcome to an exit code.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("reclab: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[derive(Serialize)]
struct Summary<'a, T: Serialize> {
    command: &'a str,
    config_hash: String,
    master_seed: u64,
    status: Status,
    config: &'a ExperimentConfig,
    result: &'a T,
}

fn write_summary<T: Serialize>(
    out: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    status: Status,
    result: &T,
) -> Result<()> {
    let summary =
        Summary { command, config_hash: cfg.hash(), master_seed: cfg.master_seed, status, config: cfg, result };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(out.join(format!("{}_summary.json", command.replace(' ', "_"))), text)?;
    Ok(())
}
