//! File formats and command implementations for the `ppovm` binary.
//!
//! Every command returns a [`Report`] holding a JSON document and a
//! human-readable table. Exit codes: 0 success, 1 domain or invariant
//! failure, 2 I/O or parse failure.

pub mod commands;
pub mod format;

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Domain(#[from] ppovm_core::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Format(_) => 2,
            Self::Domain(_) | Self::Failed(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tol: f64,
    pub seed: u64,
    pub shots: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: ppovm_core::matrix::DEFAULT_TOL,
            seed: 0,
            shots: 10_000,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

/// Result of a command.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: String,
    pub table: String,
    /// False when an invariant check failed; the process exits with 1.
    pub ok: bool,
    pub warnings: Vec<String>,
    /// Diagnostics already contained in the table; sent to stderr when
    /// the table is not shown.
    pub notes: Vec<String>,
}

impl Report {
    fn new(value: &impl serde::Serialize, table: String) -> Result<Self, CliError> {
        let json =
            serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
        Ok(Self {
            json,
            table,
            ok: true,
            warnings: Vec::new(),
            notes: Vec::new(),
        })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Writes the report according to `cfg`: JSON to `--out` when given,
/// otherwise the selected format to stdout.
pub fn emit(report: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if cfg.format != OutputFormat::Table {
        for n in &report.notes {
            eprintln!("{n}");
        }
    }
    match &cfg.out {
        Some(path) => {
            fs::write(path, format!("{}\n", report.json)).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            if cfg.format == OutputFormat::Table {
                print!("{}", report.table);
            }
        }
        None => match cfg.format {
            OutputFormat::Json => println!("{}", report.json),
            OutputFormat::Table => print!("{}", report.table),
        },
    }
    Ok(())
}
