//! `hsym`: evaluation and verification front end.
//!
//! Exit codes: 0 success, 1 a verification or positivity check failed,
//! 2 invalid input.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, FileConfig, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(hsym::Error),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hsym::Error::NonConvergence { .. }) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<hsym::Error> for CliError {
    fn from(e: hsym::Error) -> Self {
        CliError::Core(e)
    }
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let rc = RunConfig::merge(cli, &file);
    let (report, outcome) = match &cli.command {
        Command::Bspline(a) => commands::bspline(a, &file)?,
        Command::Chs(a) => commands::chs(a, &file, &rc)?,
        Command::Verify(a) => commands::verify(a, &file, &rc)?,
        Command::Combo(a) => commands::combo(a, &file, &rc)?,
        Command::Semigroup(a) => commands::semigroup(a)?,
    };
    output::emit(&report.render(rc.format), rc.output.as_deref()).map_err(CliError::Io)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
