mod args;
mod commands;
mod source;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use mprisk::quantize::Init;
use mprisk::SolverConfig;

use args::{Cli, Command, SolverArgs};

/// Exit 1: bad input. Exit 2: the solver could not deliver.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl From<mprisk::Error> for CliError {
    fn from(e: mprisk::Error) -> Self {
        if e.is_solver_failure() {
            CliError::Solver(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Defaults, then `MP_SOLVER_TOL`, then flags.
pub fn solver_config(args: &SolverArgs) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig::default().with_env_overrides()?;
    if let Some(t) = args.tol {
        cfg.fp_tol = t;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iter = n;
    }
    if let Some(a) = args.init {
        cfg.init = Init::Value(a);
    }
    if let Some(n) = args.grid_points {
        cfg.grid_points = n;
    }
    if let Some(q) = args.bracket_quantile {
        cfg.bracket_quantile = q;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Diagnose(a) => commands::diagnose(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Methods => commands::methods(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
