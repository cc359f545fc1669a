//! Batch front end for the identity engine.

pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

use std::fmt;

pub use config::{Cli, Command, RunConfig};
pub use report::{Header, ReportDocument};

/// Process exit status: 0 all pass, 1 verification failure, 2 usage error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
}

#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub exit: Exit,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Failure(_) => Exit::Fail,
            CliError::Usage(_) | CliError::Io(_) => Exit::Usage,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs a parsed command line and returns its output.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::from_args(&cli.global)?;
    if cfg.fault == Some(config::Fault::BernoulliSign) {
        phizeta::specfun::inject_sign_fault();
    }
    match &cli.command {
        Command::List { filter } => commands::list(&cfg, filter),
        Command::Verify { ids, all, filter } => commands::verify(&cfg, ids, *all, filter),
        Command::Sum { kind, m, r, z } => commands::sum(&cfg, kind, *m, *r, z),
        Command::Eval { kernel } => commands::eval(&cfg, kernel),
        Command::Generate { family, m, r, verify } => commands::generate_cmd(&cfg, family, *m, *r, *verify),
        Command::Selftest => Ok(selftest::selftest(&cfg)),
    }
}

/// Executes and delivers output to stdout or `--out`; returns the exit status.
pub fn run(cli: &Cli) -> Exit {
    let delivered = execute(cli).and_then(|out| {
        match &cli.global.out {
            Some(path) => std::fs::write(path, &out.body).map_err(CliError::Io)?,
            None => print!("{}", out.body),
        }
        Ok(out.exit)
    });
    match delivered {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("phizeta: {e}");
            e.exit()
        }
    }
}
