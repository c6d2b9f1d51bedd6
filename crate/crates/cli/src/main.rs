//! `timemap`: CSV tables of time-map solutions, limit profiles and
//! convergence sweeps.
//!
//! Exit codes: 0 success, 1 `converge` distances not strictly decreasing,
//! 2 usage error, 3 numerical failure or no solution.

mod commands;
mod config;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Table;
use crate::config::{Cli, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] timemap_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }
}

fn write_table<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.header)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|x| format!("{x:.16e}")))?;
    }
    let mut out = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    for line in &table.comments {
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn run() -> Result<Table, CliError> {
    let (command, flags) = Cli::parse().command.split();
    let config = RunConfig::resolve(command, flags)?;
    let table = commands::run(&config)?;
    match &config.out {
        Some(path) => write_table(&table, File::create(path)?)?,
        None => write_table(&table, io::stdout().lock())?,
    }
    Ok(table)
}

fn main() -> ExitCode {
    match run() {
        Ok(table) if table.decreasing == Some(false) => {
            eprintln!("timemap: distances are not strictly decreasing");
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("timemap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
