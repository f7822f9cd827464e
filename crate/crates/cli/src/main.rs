//! `combsync` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 I/O failure.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "combsync",
    version,
    about = "Clock phase caching and comb fronthaul simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario JSON file, or a directory of them. Defaults to the bundled scenario.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Simulate scenarios and write reports.
    Run,
    /// Check scenarios without writing anything.
    Validate,
    /// List noise presets, or save them as JSON profiles into --out.
    Presets,
    /// Harmonic amplitude versus filter bandwidth and fibre length.
    FadingTable,
    /// Integrated jitter of the scenario's noise presets.
    Jitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are invalid input, not I/O failures
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run => commands::run(&cli),
        Command::Validate => commands::validate(&cli),
        Command::Presets => commands::presets(&cli),
        Command::FadingTable => commands::fading_table(&cli),
        Command::Jitter => commands::jitter(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
