//! `bcclab`: construct codes, simulate error-rate curves and analyze them
//! into security reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "bcclab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by the commands that read an experiment configuration.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Experiment configuration (JSON)
    #[arg(short, long)]
    pub config: PathBuf,

    /// Output directory (overrides the config)
    #[arg(short, long, env = "BCCLAB_OUT")]
    pub out: Option<PathBuf>,

    /// Seed for construction and simulation (overrides the config)
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the codes of a configuration and write alist and sidecar files
    Construct {
        #[command(flatten)]
        common: Common,

        /// Fraction of information bits in PC1 (overrides the config)
        #[arg(long)]
        pc1_fraction: Option<f64>,
    },
    /// Estimate P, Pp and Ps over the SNR grid; resumes from a checkpoint
    Simulate {
        #[command(flatten)]
        common: Common,

        /// Worker threads (results do not depend on it)
        #[arg(short, long)]
        workers: Option<usize>,

        #[arg(long)]
        min_errors: Option<u64>,

        #[arg(long)]
        max_frames: Option<u64>,

        /// Stop after this many new grid points, leaving only the checkpoint
        #[arg(long, hide = true)]
        stop_after: Option<usize>,
    },
    /// Turn simulated curves into a security report and plot data
    Analyze {
        #[command(flatten)]
        common: Common,

        #[arg(long)]
        delta: Option<f64>,

        #[arg(long)]
        eta: Option<f64>,

        /// Largest concatenation factor tried
        #[arg(long)]
        l_max: Option<u32>,
    },
    /// Print security reports as table rows
    Report {
        /// Report files written by `analyze`
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
}

/// Failure with its exit code: 2 for usage or configuration errors, 1 otherwise.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

pub fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { common, pc1_fraction } => commands::construct(&common, pc1_fraction),
        Command::Simulate {
            common,
            workers,
            min_errors,
            max_frames,
            stop_after,
        } => commands::simulate(&common, workers, min_errors, max_frames, stop_after),
        Command::Analyze {
            common,
            delta,
            eta,
            l_max,
        } => commands::analyze(&common, delta, eta, l_max),
        Command::Report { reports } => commands::report(&reports),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
