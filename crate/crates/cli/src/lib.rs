//! `gp-spectrum` command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gp_spectrum_core::SpectrumError;
use thiserror::Error;

use config::{Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solve failed: {0}")]
    Solve(#[from] SpectrumError),
    #[error("{0}")]
    ClaimsFailed(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Solve(_) => 2,
            CliError::ClaimsFailed(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gp-spectrum", version, about = "Spectrum of the Gurtin-Pipkin heat equation with exponential-sum memory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Real branches and the complex pair for every mode in range.
    Spectrum(CommonArgs),
    /// Check interlacing, containment, monotonicity, half-plane location,
    /// contour counts, oracle agreement and pair asymptotics.
    Verify(CommonArgs),
    /// Integrate the mode equations and reconstruct the field.
    Simulate(CommonArgs),
    /// Asymptotic gaps over doublings of n.
    Sweep(CommonArgs),
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Resolved invocation: config plus flag overrides.
pub struct Invocation {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub format: Format,
    pub jobs: usize,
}

impl CommonArgs {
    fn resolve(&self) -> Result<Invocation, CliError> {
        let config = RunConfig::load(&self.config)?;
        let out_dir = self
            .out
            .clone()
            .or_else(|| config.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        let format = self.format.or(config.format).unwrap_or(Format::Csv);
        if self.jobs == 0 {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        Ok(Invocation {
            config,
            out_dir,
            format,
            jobs: self.jobs,
        })
    }
}

type CommandFn = fn(&Invocation, &mut dyn Write) -> Result<(), CliError>;

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let (args, cmd): (&CommonArgs, CommandFn) = match &cli.command {
        Command::Spectrum(a) => (a, commands::cmd_spectrum),
        Command::Verify(a) => (a, commands::cmd_verify),
        Command::Simulate(a) => (a, commands::cmd_simulate),
        Command::Sweep(a) => (a, commands::cmd_sweep),
    };
    let result = args.resolve().and_then(|inv| cmd(&inv, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "gp-spectrum: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Solve(SpectrumError::BracketFailure { j: 1, lo: -1.0, hi: 0.0 }).exit_code(), 2);
        assert_eq!(CliError::ClaimsFailed("x".into()).exit_code(), 3);
    }

    #[test]
    fn missing_config_file_exits_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["gp-spectrum", "verify", "--config", "/nonexistent/run.toml"], &mut out, &mut err);
        assert_eq!(code, 1);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["gp-spectrum", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("spectrum"));
    }
}
