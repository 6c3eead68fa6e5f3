//! `radimp` command-line tool.
//!
//! Exit codes: 0 on success, 1 on bad flags, unreadable input, unwritable output or a
//! violated precondition, 2 when results were produced but some point did not converge
//! (or an oracle check fell outside its limit).

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;
use config::Config;

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let jobs = match cli.jobs {
        Some(j) => Some(j),
        None => cfg.get("jobs")?,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            anyhow::bail!("--jobs must be at least 1");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().context("cannot start worker threads")?;

    pool.install(|| match &cli.command {
        Command::Sweep(a) => commands::sweep(a, &cfg),
        Command::Eval(a) => commands::eval(a, &cfg),
        Command::OracleCheck(a) => commands::oracle_check(a, &cfg),
        Command::CompareProfile(a) => commands::compare_profile(a, &cfg),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Incomplete) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
