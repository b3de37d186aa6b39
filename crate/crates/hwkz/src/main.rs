//! `hwkz`: runs the Hasse-Witt and KZ check suites, searches p-adic domain
//! points and certifies the limit sequences there.
//!
//! Exit status: 0 when every check passes, 1 on a failed check, 2 on a
//! configuration error, 3 when no domain point is found.

mod config;
mod converge;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{resolve, ConfigError, Opts};
use output::{emit, summary_table, to_json};
use verify::Suite;

#[derive(Parser)]
#[command(name = "hwkz", version, about = "Dwork-type congruences for Hasse-Witt matrices and p-adic KZ solutions")]
struct Cli {
    /// JSON file with default values for the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Search domain points and certify the limit sequences there.
    Converge {
        #[command(flatten)]
        opts: Opts,
    },
    /// Print the constants and degree tables of a parameter set.
    Describe {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Debug)]
pub enum RunError {
    Config(hwkz_core::Error),
    Core(hwkz_core::Error),
    Io(String),
}

impl From<hwkz_core::Error> for RunError {
    fn from(e: hwkz_core::Error) -> Self {
        RunError::Core(e)
    }
}

fn exit_for(e: &RunError) -> (u8, String) {
    use hwkz_core::Error as E;
    match e {
        RunError::Config(e) => (2, ConfigError::from(e.clone()).0),
        RunError::Core(E::SearchExhausted(n)) => (3, format!("domain point search exhausted after {n} attempts")),
        RunError::Core(e @ (E::InvalidParams(_) | E::NotPrime(_) | E::ModulusTooLarge { .. } | E::EvenPrime | E::ExponentOverflow)) => {
            (2, ConfigError::from(e.clone()).0)
        }
        RunError::Core(e) => (1, e.to_string()),
        RunError::Io(msg) => (1, msg.clone()),
    }
}

fn configure_workers() {
    if let Some(n) = std::env::var("HWKZ_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|n| *n > 0) {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<bool, RunError> {
    let file = cli.config.as_deref();
    let bad = |e: ConfigError| RunError::Config(hwkz_core::Error::InvalidParams(e.0));
    match cli.command {
        Command::Verify { suite, opts } => {
            let cfg = resolve(opts, file, 2, 20).map_err(bad)?;
            let report = verify::run(&cfg, suite)?;
            let summary = summary_table(&report.reports);
            emit(&to_json(&report), &summary, cfg.out.as_deref()).map_err(|e| RunError::Io(e.to_string()))?;
            Ok(report.pass)
        }
        Command::Converge { opts } => {
            let cfg = resolve(opts, file, 3, 10).map_err(bad)?;
            let run = converge::run(&cfg)?;
            let summary = summary_table(&converge::all_reports(&run.report));
            if let Some(out) = &cfg.out {
                converge::write_table(&out.with_extension("csv"), &run.table)?;
            }
            emit(&to_json(&run.report), &summary, cfg.out.as_deref()).map_err(|e| RunError::Io(e.to_string()))?;
            Ok(run.report.pass)
        }
        Command::Describe { opts } => {
            let cfg = resolve(opts, file, 3, 1).map_err(bad)?;
            let description = hwkz_core::kz::describe(&cfg.params)?;
            emit(&to_json(&description), "", cfg.out.as_deref()).map_err(|e| RunError::Io(e.to_string()))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (code, msg) = exit_for(&e);
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
