//! `dialometer rare`: rare-word stratification plus dialogue-difficulty
//! buckets over a human corpus.

use std::path::PathBuf;

use clap::Args;
use dialometer_core::analysis::{
    default_bucket_edges, difficulty_buckets, rare_word_report, rare_word_set, DifficultyBucket,
    RareWordReport,
};
use serde::Serialize;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{from_analysis, Failure};
use crate::report::{
    checksum_input, emit, to_flat_csv, to_json_bytes, InputFile, SCHEMA_VERSION,
};

#[derive(Debug, Args)]
pub struct RareArgs {
    /// Human corpus to stratify
    #[arg(long)]
    pub human: PathBuf,
    /// Training corpus defining the vocabulary and its rare tail
    #[arg(long)]
    pub train: PathBuf,
    /// Per-game outcomes enabling the accuracy split
    #[arg(long)]
    pub outcomes: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct RareDoc {
    schema_version: u32,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    report: RareWordReport,
    buckets: Vec<DifficultyBucket>,
}

pub fn run(args: &RareArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    config::with_jobs(args.common.jobs, || {
        let mut inputs = vec![
            checksum_input("human", &args.human)?,
            checksum_input("train", &args.train)?,
        ];
        if let Some(path) = &args.outcomes {
            inputs.push(checksum_input("outcomes", path)?);
        }
        let human =
            super::load_corpus_with(&args.human, &config, config.status_filter.human_filter())?;
        let vocab = super::build_train_vocab(&args.train, &config)?;
        let outcomes = args
            .outcomes
            .as_ref()
            .map(|path| super::load_game_outcomes(path))
            .transpose()?;

        let rare = rare_word_set(&vocab, config.rare_threshold);
        let mut report =
            rare_word_report(&human, &rare, outcomes.as_deref(), config.rare_threshold)
                .map_err(from_analysis)?;
        report.rare_fraction_of_vocab = Some(rare.len() as f64 * 100.0 / vocab.len() as f64);
        let buckets =
            difficulty_buckets(&human, &rare, outcomes.as_deref(), &default_bucket_edges())
                .map_err(from_analysis)?;

        let doc = RareDoc {
            schema_version: SCHEMA_VERSION,
            config: serde_json::to_value(&config).expect("config serializes"),
            inputs,
            report,
            buckets,
        };
        let bytes = match config.output_format {
            OutputFormat::Json => to_json_bytes(&doc)?,
            OutputFormat::Csv => to_flat_csv(&doc)?,
        };
        emit(&bytes, args.common.out.as_deref())
    })
}
