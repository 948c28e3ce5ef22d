//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration, 3 constraint
//! violation or invalid spectral matrix, 4 degenerate physics (readout
//! quadrature orthogonal to the signal, unstable coupled dynamics).

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub use commands::{execute, parse_matrix_file, Outcome};
pub use config::{Command, Format, InputSpec, RunConfig};
pub use output::{format_number, Cell, Document, Summary, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Violation(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Violation(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            e if e.is_physics_degenerate() => CliError::Degenerate(e.to_string()),
            e @ (E::InvalidMatrix(_) | E::InvalidDetector { .. }) => CliError::Violation(format!("violation: {e}")),
            e => CliError::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_outcome(cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let doc = &outcome.document;
    match cfg.format {
        Format::Json => {
            let config = serde_json::to_value(cfg).map_err(|e| CliError::Io(e.to_string()))?;
            let mut w = sink(cfg.output.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &doc.to_json(config)).map_err(|e| CliError::Io(e.to_string()))?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        Format::Csv => match (&doc.summary, &doc.table) {
            (Some(summary), table) => {
                summary.write_csv(sink(cfg.output.as_deref())?)?;
                if let (Some(t), Some(p)) = (table, &cfg.spectra_output) {
                    t.write_csv(sink(Some(p))?)?;
                }
            }
            (None, Some(table)) => table.write_csv(sink(cfg.output.as_deref())?)?,
            (None, None) => {}
        },
    }
    Ok(())
}

/// Runs one command end to end and returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    let outcome = execute(cfg)?;
    write_outcome(cfg, &outcome)?;
    for note in &outcome.notes {
        eprintln!("detnoise: {note}");
    }
    Ok(outcome.exit_code)
}
