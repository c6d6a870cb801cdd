//! `dialometer zipf`: rank-ordered token frequency curve as 2-column CSV.

use std::path::PathBuf;

use clap::Args;
use dialometer_core::textmetrics::{zipf_curve, ZipfCurve};
use serde::Serialize;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{precondition, Failure};
use crate::report::{checksum_input, emit, to_json_bytes, InputFile, SCHEMA_VERSION};

#[derive(Debug, Args)]
pub struct ZipfArgs {
    /// Corpus to profile, JSON-Lines
    #[arg(long)]
    pub gen: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct ZipfDoc {
    schema_version: u32,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    curve: ZipfCurve,
}

pub fn run(args: &ZipfArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    let corpus =
        super::load_corpus_with(&args.gen, &config, config.status_filter.generated_filter())?;
    let curve = zipf_curve(&corpus, config.speaker_scope).map_err(precondition)?;

    // 2-column CSV is the contract and the default for this command
    let bytes = match args.common.format {
        None | Some(OutputFormat::Csv) => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["rank", "frequency"])
                .map_err(|e| crate::failure::internal(e.to_string()))?;
            for (rank, frequency) in &curve.points {
                writer
                    .write_record([rank.to_string(), frequency.to_string()])
                    .map_err(|e| crate::failure::internal(e.to_string()))?;
            }
            writer
                .into_inner()
                .map_err(|e| crate::failure::internal(e.to_string()))?
        }
        Some(OutputFormat::Json) => to_json_bytes(&ZipfDoc {
            schema_version: SCHEMA_VERSION,
            config: serde_json::to_value(&config).expect("config serializes"),
            inputs: vec![checksum_input("gen", &args.gen)?],
            curve,
        })?,
    };
    emit(&bytes, args.common.out.as_deref())
}
