use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ncmorita_cli::commands::{self, CliError};

/// Morita equivalence of noncommutative tori and twisted group C*-algebras.
#[derive(Parser)]
#[command(name = "ncmorita", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print g, k, θ' and θ̃ for a torus.
    Canon { file: PathBuf },
    /// Print center, trace range and K-group ranks.
    Invariants { file: PathBuf },
    /// Decide strong Morita equivalence of two problems.
    Decide { first: PathBuf, second: PathBuf },
    /// Decide every pair listed in a manifest, in parallel.
    DecideBatch { manifest: PathBuf },
    /// Check the bundled worked examples.
    VerifyPaperExamples,
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Canon { file } => commands::canon(&commands::load(&file)?),
        Command::Invariants { file } => Ok(commands::invariants(&commands::load(&file)?)),
        Command::Decide { first, second } => {
            let bounds = commands::bounds_from_env()?;
            let (a, b) = (commands::load(&first)?, commands::load(&second)?);
            Ok(format!("{}\n", commands::decide(&a, &b, &bounds)))
        }
        Command::DecideBatch { manifest } => commands::decide_batch(&manifest, &commands::bounds_from_env()?),
        Command::VerifyPaperExamples => commands::verify_examples(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Verification(report)) => {
            println!("{report}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
