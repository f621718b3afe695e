mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Settings;

/// Error carrying the process exit status: 1 for I/O, 2 for invalid input
/// or settings, 3 when a backend cannot handle the instance.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn backend(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<olcqubo::Error> for Failure {
    fn from(err: olcqubo::Error) -> Self {
        use olcqubo::Error as E;
        let code = match err {
            E::Io(_) => 1,
            E::TooManyVariables { .. }
            | E::TooManyQubits { .. }
            | E::EmbeddingNotFound { .. }
            | E::InvalidEmbedding(_)
            | E::QubitOutOfRange { .. } => 3,
            _ => 2,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "olcqubo",
    version,
    about = "De novo sequence reconstruction through QUBO, Ising and QAOA solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reads → overlap TSP → QUBO → solve → decoded tours and assemblies.
    Assemble {
        /// Reads, one per line, or FASTA.
        input: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
    /// Solve a `.qubo` file directly.
    SolveQubo {
        input: PathBuf,
        /// Read the file's coefficients as Ising biases and couplings.
        #[arg(long)]
        ising: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// Minor-embed a model into a Chimera graph and verify the result.
    Embed(commands::EmbedArgs),
    /// The assembly pipeline with the QAOA backend.
    Qaoa {
        input: PathBuf,
        #[command(flatten)]
        settings: Settings,
    },
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Assemble { input, settings } => commands::assemble(&input, settings, None),
        Command::SolveQubo {
            input,
            ising,
            settings,
        } => commands::solve_qubo(&input, ising, settings),
        Command::Embed(args) => commands::embed(&args),
        Command::Qaoa { input, settings } => {
            commands::assemble(&input, settings, Some(config::Backend::Qaoa))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
