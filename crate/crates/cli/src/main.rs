//! `automorph`: batch experiments on automorphic coefficient sequences.

mod config;
mod run;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use automorph::oscillate::{preset_profiles, DEFAULT_EPSILON};
use clap::{Parser, Subcommand};

use crate::config::{ExperimentConfig, RawConfig};

const THREADS_VAR: &str = "AUTOMORPH_THREADS";

const EXIT_VALIDATION: u8 = 1;
const EXIT_ACCEPTANCE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "automorph",
    version,
    about = "Sign changes and moments of automorphic L-function coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key=value config file.
    Run {
        config: PathBuf,
        /// Override a config entry; may be repeated.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the embedded golden checks.
    Selfcheck,
    /// Print the exponent presets.
    Presets {
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var(THREADS_VAR) {
        let threads: usize =
            value.parse().ok().filter(|&t| t > 0).with_context(|| {
                format!("{THREADS_VAR} must be a positive integer, got `{value}`")
            })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

fn is_io(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause.is::<std::io::Error>()
            || cause.is::<tempfile::PersistError>()
            || matches!(
                cause.downcast_ref::<automorph::Error>(),
                Some(automorph::Error::Io(_) | automorph::Error::Csv(_))
            )
    })
}

fn cmd_run(path: PathBuf, overrides: &[String]) -> Result<u8> {
    let mut raw = RawConfig::load(&path)?;
    raw.apply_overrides(overrides)?;
    let config = ExperimentConfig::from_raw(&raw)?;
    let outcome = run::run(&config)?;
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    if let Some(tasks) = outcome.summary.get("tasks").and_then(|t| t.as_object()) {
        for (name, result) in tasks {
            let ok = result["passed"].as_bool().unwrap_or(false);
            println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        }
    }
    Ok(if outcome.passed { 0 } else { EXIT_ACCEPTANCE })
}

fn cmd_selfcheck() -> u8 {
    let mut failed = 0;
    for check in selfcheck::run_checks() {
        match check.outcome {
            Ok(detail) => println!("PASS {}: {detail}", check.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {detail}", check.name);
            }
        }
    }
    if failed == 0 {
        0
    } else {
        eprintln!("{failed} golden check(s) failed");
        EXIT_ACCEPTANCE
    }
}

fn cmd_presets(epsilon: f64) {
    println!(
        "{:<18} {:>7} {:>8} {:>6} {:>9} {:>8}  valid",
        "name", "alpha", "beta", "gamma", "threshold", "r"
    );
    for (name, p) in preset_profiles(epsilon) {
        println!(
            "{name:<18} {:>7} {:>8} {:>6} {:>9} {:>8.4}  {}",
            p.alpha.to_string(),
            p.beta.to_string(),
            p.gamma.to_string(),
            p.threshold().to_string(),
            p.r,
            p.is_valid()
        );
        println!("    {}", p.provenance);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { config, overrides } => cmd_run(config, &overrides),
        Command::Selfcheck => Ok(cmd_selfcheck()),
        Command::Presets { epsilon } => {
            cmd_presets(epsilon);
            Ok(0)
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_io(&err) {
                EXIT_IO
            } else {
                EXIT_VALIDATION
            })
        }
    }
}
