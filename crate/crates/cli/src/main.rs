//! `tower`: verification runs and tables for the F_8 tower.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "tower",
    version,
    about = "Checks and tables for the Artin-Schreier tower x_i^2 + x_i = x_{i-1} + 1 + 1/x_{i-1} over F_8"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every verification suite; exit 1 if any fails.
    Verify {
        /// Cap the tower levels of each suite (default: full ranges).
        #[arg(long)]
        imax: Option<usize>,
        /// Series precision for the expansion suite.
        #[arg(long, default_value_t = 128)]
        precision: i64,
    },
    /// Genus, point counts and ratios per level.
    Table {
        #[arg(long, default_value_t = 10)]
        imax: usize,
    },
    /// Rational chain counts over F_{2^k} and the splitting clauses.
    Points {
        #[arg(long, default_value_t = 10)]
        imax: usize,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Genus by the Hurwitz sum and in closed form.
    Genus {
        #[arg(long, default_value_t = 10)]
        imax: usize,
    },
    /// Ramification ledger of one level.
    Nseq {
        #[arg(long, default_value_t = 10)]
        level: usize,
    },
    /// L-polynomial of a low level from its point counts.
    Zeta {
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Genus to test instead of the closed form.
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Expansions m_j and principal parts F_j along an index sequence.
    Expand {
        /// Comma-separated index sequence, e.g. `1,r,1,r2,0`.
        #[arg(long, default_value = "1,r,1,r2,1")]
        seq: String,
        #[arg(long, default_value_t = 128)]
        precision: i64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed")]
    Failed,
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
