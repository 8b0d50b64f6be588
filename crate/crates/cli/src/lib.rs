//! Command-line front end: run, sweep, shots and verify.

pub mod config;
pub mod error;
pub mod report;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::{Parser, Subcommand};

use config::{Format, Mode, RunConfig, Settings};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ifm",
    version,
    about = "Interaction-free multi-pixel imaging simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact distribution, analytic comparison and per-cycle trace
    Run(Settings),
    /// Exact and asymptotic probabilities over a range of N or T
    Sweep(Settings),
    /// Monte Carlo click experiment with reconstruction
    Shots(Settings),
    /// Run the built-in invariant suites
    Verify {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn resolve(mode: Mode, settings: Settings) -> Result<RunConfig, CliError> {
    RunConfig::resolve(mode, &settings.merged()?)
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(s) => {
            let config = resolve(Mode::Run, s)?;
            let rep = report::run_report(&config)?;
            let bytes = report::render(
                config.format,
                || report::to_json(&rep),
                || report::run_csv(&rep),
            )?;
            emit(&bytes, config.out.as_deref())
        }
        Command::Sweep(s) => {
            let config = resolve(Mode::Sweep, s)?;
            let rep = report::sweep_report(&config)?;
            let bytes = report::render(
                config.format,
                || report::to_json(&rep),
                || report::sweep_csv(&rep),
            )?;
            emit(&bytes, config.out.as_deref())
        }
        Command::Shots(s) => {
            let config = resolve(Mode::Shots, s)?;
            let outcome = report::shots_report(&config)?;
            let rep = &outcome.report;
            let bytes = report::render(
                config.format,
                || report::to_json(rep),
                || report::shots_csv(&outcome.sample),
            )?;
            emit(&bytes, config.out.as_deref())?;
            if !rep.violations.is_empty() {
                return Err(CliError::Numeric(format!(
                    "impossible outcomes observed: {}",
                    rep.violations.join(", ")
                )));
            }
            match &rep.ground_truth {
                Some(truth) if !truth.matches => Err(CliError::Mismatch(format!(
                    "reconstructed {} but the object is {}",
                    rep.reconstruction
                        .as_ref()
                        .map_or("-", |r| r.pattern.as_str()),
                    truth.pattern
                ))),
                _ => Ok(()),
            }
        }
        Command::Verify { format, out } => {
            let result = ifm_core::verify::run_all();
            let summary = report::VerifyOutput::from(&result);
            for c in &summary.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                eprintln!("[{tag}] {}: {}", c.name, c.detail);
            }
            let bytes = report::render(
                format,
                || report::to_json(&summary),
                || report::verify_csv(&summary),
            )?;
            emit(&bytes, out.as_deref())?;
            let failed: Vec<&str> = summary
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Numeric(format!(
                    "failed suites: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}
