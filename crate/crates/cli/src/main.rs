//! Batch command-line front end for the style analysis pipeline.
//!
//! Subcommands mirror the workflow: `synth` generates a seeded test corpus,
//! `extract` turns a corpus into a feature-matrix CSV, `cluster` runs the
//! unsupervised analysis, `train` cross-validates the classifiers. One
//! `--seed` governs all randomness; reruns with the same inputs and seed are
//! byte-identical. Exit codes: 0 success, 1 runtime/data error, 2 usage
//! error.

mod commands;
mod manifest;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "stylometry", version, about = "Code-style measurement and analysis for C++ corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 30 style features of one (year, round, problem) selection
    /// into a feature-matrix CSV.
    Extract(commands::extract::ExtractArgs),
    /// Embed, cluster and characterize a feature matrix (t-SNE, Ward HAC,
    /// k-means, feature importance).
    Cluster(commands::cluster::ClusterArgs),
    /// Cross-validate classifiers on a feature matrix and write evaluation
    /// reports.
    Train(commands::train::TrainArgs),
    /// Generate a seeded synthetic corpus with known style profiles and
    /// labels.
    Synth(commands::synth::SynthArgs),
}

/// Errors split by exit code: usage problems exit 2, everything else 1.
pub enum CommandError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CommandError {
    fn from(e: E) -> Self {
        CommandError::Runtime(e.into())
    }
}

pub type CommandResult = Result<(), CommandError>;

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(args) => commands::extract::run(&args),
        Command::Cluster(args) => commands::cluster::run(&args),
        Command::Train(args) => commands::train::run(&args),
        Command::Synth(args) => commands::synth::run(&args),
    };
    match result {
        Ok(()) => {}
        Err(CommandError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::exit(2);
        }
        Err(CommandError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
