//! Verification runner behind the `ncqm` binary: configuration, suites and
//! line-delimited JSON reports.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::{Overrides, RunConfig};
pub use report::{Record, Report};
pub use suites::{run_suite, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Library(#[from] ncqm::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ncqm", version, about = "Run verification suites and emit JSON reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one suite: group, matrix, coadjoint, rep, generators, resolution,
    /// quantize, pov, wigner or all.
    Run {
        suite: String,
        /// plain-text `key = value` file; flags take precedence
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Parse arguments, run, write the report; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(pass) => {
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let Command::Run { suite, config, overrides } = cli.command;
    let suite: Suite = suite.parse()?;
    let text = match &config {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?,
        None => String::new(),
    };
    let cfg = RunConfig::parse(&text, &overrides)?;
    suites::validate_for(suite, &cfg)?;
    let report = run_suite(suite, &cfg)?;
    let body = report.to_json_lines()?;
    match &cfg.out {
        Some(p) => std::fs::write(p, &body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    let failed = report.failures();
    eprintln!("{}: {} checks, {} failed", suite.name(), report.records.len(), failed.len());
    for r in failed {
        eprintln!("  FAIL {} measured {} expected {} tol {}", r.id, r.measured, r.expected, r.tolerance);
    }
    Ok(report.all_pass())
}
