//! The `feykac` command line.
//!
//! ```text
//! feykac <command> [--config FILE] [--set key=value]... [--out PATH]
//!        [--format csv|json] [--seed N] [--show-config]
//! ```
//!
//! Exit status: 0 when every check in the table passes, 1 when a check
//! fails, 2 on a usage, configuration or runtime error (no output file is
//! written in that case).

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::{Format, RunConfig};
pub use output::{Cell, Table};

use crate::error::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Closed forms for k and the first two moments, checked against ∫q dy.
    Oracle,
    /// Monte Carlo estimates of v(t, x).
    Mc,
    /// Splitting scheme with n rounds.
    Split,
    /// Crank-Nicolson reference solution.
    Pde,
    /// Monte Carlo, splitting, Crank-Nicolson and Mehler side by side.
    Compare,
    /// Dyadic convergence study of the splitting scheme.
    Converge,
}

#[derive(Debug, Parser)]
#[command(
    name = "feykac",
    version,
    about = "Feynman-Kac solvers for the perturbed harmonic-oscillator heat equation"
)]
struct Args {
    command: Option<Command>,
    /// TOML file with run parameters.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one parameter; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    show_config: bool,
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Table> {
    match command {
        Command::Oracle => commands::cmd_oracle(cfg),
        Command::Mc => commands::cmd_mc(cfg),
        Command::Split => commands::cmd_split(cfg),
        Command::Pde => commands::cmd_pde(cfg),
        Command::Compare => commands::cmd_compare(cfg),
        Command::Converge => commands::cmd_converge(cfg),
    }
}

fn effective_config(args: &Args) -> Result<RunConfig> {
    let text = match &args.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut cfg = RunConfig::load(text.as_deref(), &args.set)?;
    if let Some(out) = &args.out {
        cfg.out = out.to_string_lossy().into_owned();
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run_inner(args: &Args, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = effective_config(args)?;
    if args.show_config {
        stdout.write_all(cfg.to_toml().as_bytes())?;
        return Ok(EXIT_PASS);
    }
    let command = args.command.ok_or_else(|| {
        Error::Config("a command is required: oracle, mc, split, pde, compare or converge".into())
    })?;
    let table = execute(command, &cfg)?;
    let bytes = table.render(&cfg)?;
    if cfg.out.is_empty() {
        stdout.write_all(&bytes)?;
    } else {
        output::write_atomic(std::path::Path::new(&cfg.out), &bytes)?;
    }
    Ok(if table.passed { EXIT_PASS } else { EXIT_FAIL })
}

/// Parses `argv` (including the program name), runs, and returns the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run_inner(&args, stdout) {
        Ok(code) => {
            if code == EXIT_FAIL {
                let _ = writeln!(stderr, "feykac: one or more checks failed");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "feykac: {e}");
            EXIT_ERROR
        }
    }
}
