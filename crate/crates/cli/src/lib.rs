//! Command-line workbench: network files, CSV traces and the `mwio`
//! subcommands.

pub mod commands;
pub mod format;
pub mod trace;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use format::{parse_network, serialize_network, EdgeRecord, FormatError, NetworkFile};
pub use trace::{plot_data, read_trace, write_trace, TraceTable};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] mwio_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Trace(String),
}

impl CliError {
    /// Name printed on stderr before the message.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Model(e) => e.name(),
            CliError::Format(e) => e.name(),
            CliError::File { .. } | CliError::Io(_) => "IoError",
            CliError::Trace(_) => "TraceError",
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => CliError::Io(io),
                _ => unreachable!(),
            }
        } else {
            CliError::Trace(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mwio",
    version,
    about = "Matrix-weighted input-output network workbench"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Iterate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the modelling assumptions and classify the network.
    Validate { file: PathBuf },
    /// Run x[k+1] = Ā·x[k] + y from the file's initial state.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Stop once successive states differ by at most this (∞-norm).
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Write the recorded states to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Record every k-th state.
        #[arg(long, default_value_t = 1)]
        record_every: usize,
    },
    /// Equilibrium by a direct solve or by iterating the update law.
    Equilibrium {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Dominant eigenvalue and Perron vector of the lifted matrix.
    Spectrum { file: PathBuf },
    /// PageRank-regularize every edge matrix, then report the spectrum.
    Pagerank {
        file: PathBuf,
        #[arg(long)]
        damping: f64,
    },
    /// Per-industry series of one agent from a trace file.
    PlotData {
        trace: PathBuf,
        #[arg(long)]
        agent: usize,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file } => commands::validate(file, json, out),
        Command::Simulate {
            file,
            steps,
            tol,
            trace,
            record_every,
        } => {
            let opts = mwio_core::SimulationOptions {
                max_steps: *steps,
                convergence_tol: *tol,
                record_every: *record_every,
            };
            commands::simulate(file, &opts, trace.as_deref(), json, out)
        }
        Command::Equilibrium {
            file,
            method,
            steps,
            tol,
        } => {
            let opts = mwio_core::SimulationOptions {
                max_steps: *steps,
                convergence_tol: *tol,
                record_every: 1,
            };
            commands::equilibrium(file, *method, &opts, json, out)
        }
        Command::Spectrum { file } => commands::spectrum(file, None, json, out),
        Command::Pagerank { file, damping } => commands::spectrum(file, Some(*damping), json, out),
        Command::PlotData { trace, agent } => commands::plot(trace, *agent, out),
    }
}
