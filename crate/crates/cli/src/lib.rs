//! `rfpm` command-line front end. [`run`] is the whole program; the binary
//! only forwards `argv` and the exit code.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod io;
pub mod manifest;
pub mod plot;

pub use args::{Cli, Command};
pub use manifest::RunManifest;
pub use plot::emit_plot_data;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 1 for usage errors, 2 for everything else.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) | CliError::Io { .. } => 2,
        }
    }
}

/// Wraps any library error as a runtime failure.
pub(crate) fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("RFPM_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("RFPM_THREADS must be a thread count, got `{v}`"))),
        _ => Ok(None),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Errors go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rfpm: {e}");
            e.code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let threads = thread_count(cli.threads)?;
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(runtime)?
            .install(|| commands::dispatch(cli.command)),
        None => commands::dispatch(cli.command),
    }
}
