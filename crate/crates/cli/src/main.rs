mod args;
mod commands;
mod config;
mod io;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use serde_json::json;
use wrast::Error;

use crate::args::Cli;

/// Why a run stopped early, with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    /// Attached to the diagnostics, e.g. the failing check reports.
    pub payload: Option<serde_json::Value>,
}

impl Failure {
    pub fn usage(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind,
            message: message.into(),
            payload: None,
        }
    }

    pub fn numeric(message: impl Into<String>, payload: serde_json::Value) -> Self {
        Failure {
            code: 1,
            kind: "check_failed",
            message: message.into(),
            payload: Some(payload),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Aliasing(_) => (1, "aliasing"),
            Error::NonFinite { .. } => (1, "non_finite"),
            Error::Invariant(_) => (1, "invariant"),
            Error::Inadmissible { .. } => (2, "inadmissible"),
            Error::Io(_) => (2, "io"),
            Error::Format(_) => (2, "format"),
            _ => (2, "invalid"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
            payload: None,
        }
    }
}

fn set_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("WRAST_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage("env", format!("WRAST_THREADS = {v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage("env", e.to_string()))
}

fn parse(args: Vec<OsString>) -> Result<Cli, Failure> {
    let cmd = Cli::command();
    let args = match config::config_path(&args) {
        Some(path) => config::merge(&cmd, args, &config::load(path.as_ref())?)?,
        None => args,
    };
    let m = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                std::process::exit(if e.kind() == DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 });
            }
            return Err(Failure::usage("usage", e.render().to_string().trim_end()));
        }
    };
    Cli::from_arg_matches(&m).map_err(|e| Failure::usage("usage", e.to_string()))
}

fn run() -> Result<(), Failure> {
    let cli = parse(std::env::args_os().collect())?;
    set_threads()?;
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut diag = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
            if let Some(p) = f.payload {
                diag["details"] = p;
            }
            eprintln!("{diag}");
            ExitCode::from(f.code)
        }
    }
}
