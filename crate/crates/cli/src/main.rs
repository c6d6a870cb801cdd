//! `dialometer` — batch evaluation of recorded guessing-game dialogues:
//! metric reports, comparison tables, training curves, rare-word analysis,
//! Zipf profiles, and rank correlations.

mod commands;
mod config;
mod failure;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{correlate, curves, eval, rare, table, zipf};

#[derive(Parser)]
#[command(
    name = "dialometer",
    version,
    about = "Dialogue-quality and task-success evaluation over recorded guessing-game corpora",
    after_help = "Exit codes: 0 success, 2 input or schema error, 3 metric precondition violation, 4 internal invariant breach.\nThe DIALOMETER_CONFIG environment variable may point at a key-value config file applied before flags."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a corpus into a metric report (optionally with a human
    /// anchor, training vocabulary, and task outcomes)
    Eval(eval::EvalArgs),
    /// Combine metric reports into a comparison table with recomputed LD
    Table(table::TableArgs),
    /// Evaluate a manifest of corpora into epoch/downsizing metric curves
    Curves(curves::CurvesArgs),
    /// Rare-word stratification and difficulty buckets
    Rare(rare::RareArgs),
    /// Token frequency (Zipf) curve as rank,frequency CSV
    Zipf(zipf::ZipfArgs),
    /// Spearman correlation between two CSV columns (default: ld vs ts)
    Correlate(correlate::CorrelateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(args) => eval::run(args),
        Command::Table(args) => table::run(args),
        Command::Curves(args) => curves::run(args),
        Command::Rare(args) => rare::run(args),
        Command::Zipf(args) => zipf::run(args),
        Command::Correlate(args) => correlate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
