//! `gafs` — run EEG feature-selection experiments from a declarative JSON
//! config: load recordings, filter and normalize, compute the feature
//! matrix, reduce it (all features, PCA, or GA feature selection) and score
//! the result with the configured learner.
//!
//! Exit codes: 0 success, 2 config error, 3 data error, 4 runtime/budget
//! abort.

mod config;
mod experiment;
mod report;

use clap::{Parser, Subcommand};
use experiment::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gafs", version, about = "EEG feature extraction and GA feature selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a config file and print all violations.
    Validate { config: PathBuf },
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the GA and evaluation seeds.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the GA wall-clock budget in minutes.
        #[arg(long)]
        max_minutes: Option<f64>,
    },
    /// Re-print the tables of a finished run directory.
    Report { run_dir: PathBuf },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Validate { config } => match config::validate(&config) {
            Ok(_) => {
                println!("config ok");
                Ok(())
            }
            Err(violations) => {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                Err(CliError::Config(format!(
                    "{} violation(s) in {}",
                    violations.len(),
                    config.display()
                )))
            }
        },
        Command::Run {
            config,
            seed,
            max_minutes,
        } => {
            let mut cfg = config::validate(&config).map_err(|violations| {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                CliError::Config(format!(
                    "{} violation(s) in {}",
                    violations.len(),
                    config.display()
                ))
            })?;
            if let Some(seed) = seed {
                cfg.ga.seed = seed;
                cfg.evaluation.seed = seed;
            }
            if let Some(m) = max_minutes {
                cfg.ga.max_minutes = Some(m);
            }
            match experiment::run_experiment(&cfg) {
                Ok(outcome) => {
                    println!("run dir: {}", outcome.run_dir.display());
                    print!(
                        "{}",
                        report::render_run(&outcome.evaluation, outcome.ga_report.as_ref())
                    );
                    Ok(())
                }
                Err((e, run_dir)) => {
                    if let Some(dir) = run_dir {
                        eprintln!("partial artifacts kept under {}", dir.display());
                    }
                    Err(e)
                }
            }
        }
        Command::Report { run_dir } => {
            let eval_path = run_dir.join("evaluation.json");
            let text = std::fs::read_to_string(&eval_path).map_err(|e| CliError::Data {
                stage: "report".into(),
                message: format!("missing evaluation artifact {}: {e}", eval_path.display()),
            })?;
            let evaluation: experiment::Evaluation =
                serde_json::from_str(&text).map_err(|e| CliError::Data {
                    stage: "report".into(),
                    message: format!("corrupt evaluation artifact: {e}"),
                })?;
            let ga_report = match std::fs::read_to_string(run_dir.join("ga_report.json")) {
                Ok(text) => Some(serde_json::from_str(&text).map_err(|e| CliError::Data {
                    stage: "report".into(),
                    message: format!("corrupt GA report: {e}"),
                })?),
                Err(_) => None,
            };
            print!("{}", report::render_run(&evaluation, ga_report.as_ref()));
            Ok(())
        }
    }
}
