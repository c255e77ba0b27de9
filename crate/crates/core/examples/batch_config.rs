//! Runs CLI commands from a TOML config in-process and reads back the
//! summaries.

use clap::Parser;
use reclab::cli::{run, Cli, ExperimentConfig};

pub fn run_example() -> reclab::Result<()> {
    let out = std::env::temp_dir().join(format!("reclab-example-{}", std::process::id()));
    std::fs::create_dir_all(&out)?;
    let cfg_path = out.join("experiment.toml");
    std::fs::write(
        &cfg_path,
        r#"
master_seed = 17
spec = { family = "symmetric_stable", alpha = 1.5, scale_c = 1.0 }
growth = { type = "power_log", eps = 0.2, beta = 0.0 }

[simulate]
max_exponent = 14
n_trajectories = 16
"#,
    )?;
    let cfg = ExperimentConfig::load(&cfg_path)?;
    println!("config hash {}", cfg.hash());
    for args in [&["predict"][..], &["simulate"], &["verify", "kochen-stone"]] {
        let cli = Cli::parse_from(
            ["reclab", "--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()].iter().chain(args),
        );
        let status = run(&cli)?;
        println!("{}: {status:?}", args.join(" "));
    }
    let summary = std::fs::read_to_string(out.join("predict_summary.json"))?;
    println!("{}", summary.lines().take(6).collect::<Vec<_>>().join("\n"));
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> reclab::Result<()> {
    run_example()
}
