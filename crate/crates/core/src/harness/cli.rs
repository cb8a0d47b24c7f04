//! Argument parsing and exit codes for the `igv` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{compute, fmt_file, gen, run_suite, ComputeCmd, Config, GenKind};
use crate::error::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "igv", about = "Exact invariants for piecewise projective groups")]
pub struct Cli {
    /// `key=value` defaults: seed, trials, trials.<suite>, cap.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a seeded property suite.
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate one operation exactly.
    Compute {
        #[command(subcommand)]
        cmd: ComputeCmd,
    },
    /// Emit a certified element.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        seed: Option<u64>,
    },
    /// Rewrite a map file in canonical form.
    Fmt { file: PathBuf },
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Runs the CLI; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run(cmd: &Command, cfg: &Config) -> crate::Result<i32> {
    match cmd {
        Command::Verify { suite, seed, trials, json } => {
            let trials = trials.unwrap_or_else(|| cfg.trials_for(suite));
            let report = run_suite(suite, seed.unwrap_or(cfg.seed), trials)?;
            println!(
                "{} seed={} trials={} failures={} time={}ms",
                report.suite, report.seed, report.trials, report.failures, report.wall_time_ms
            );
            if !report.passed() {
                println!("first counterexample: {}", report.first_counterexample);
            }
            if let Some(path) = json {
                std::fs::write(path, report.to_json() + "\n")
                    .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Compute { cmd } => {
            println!("{}", compute(cmd, cfg.cap)?);
            Ok(EXIT_PASS)
        }
        Command::Gen { kind, seed } => {
            print!("{}", gen(kind, seed.unwrap_or(cfg.seed))?);
            Ok(EXIT_PASS)
        }
        Command::Fmt { file } => {
            print!("{}", fmt_file(file)?);
            Ok(EXIT_PASS)
        }
    }
}
