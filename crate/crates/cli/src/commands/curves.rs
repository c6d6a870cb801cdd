//! `dialometer curves`: evaluate a manifest of corpora (training epochs or
//! downsized datasets) into plot-ready metric curves.

use std::path::PathBuf;

use clap::Args;
use dialometer_core::analysis::{metric_track, parse_manifest, MetricTrack, TrackInputs};
use serde::Serialize;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{from_analysis, Failure};
use crate::report::{checksum_input, emit, sig6, to_json_bytes, InputFile, SCHEMA_VERSION};

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// TSV manifest: step<TAB>corpus_path[<TAB>outcomes_path] per line
    #[arg(long)]
    pub manifest: PathBuf,
    /// Human anchor corpus
    #[arg(long)]
    pub human: PathBuf,
    /// Training corpus for GR
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Track label (defaults to the manifest file stem)
    #[arg(long)]
    pub label: Option<String>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct CurvesDoc {
    schema_version: u32,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    track: MetricTrack,
}

fn to_csv(track: &MetricTrack) -> Result<Vec<u8>, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["step", "metric", "raw", "normalized"])
        .map_err(|e| crate::failure::internal(e.to_string()))?;
    for point in &track.points {
        writer
            .write_record([
                point.step.clone(),
                point.metric.clone(),
                format!("{}", sig6(point.raw)),
                format!("{}", sig6(point.normalized)),
            ])
            .map_err(|e| crate::failure::internal(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| crate::failure::internal(e.to_string()))
}

pub fn run(args: &CurvesArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    config::with_jobs(args.common.jobs, || {
        let steps = parse_manifest(&args.manifest).map_err(from_analysis)?;
        let stopwords = super::load_stopwords(&config)?;
        let human =
            super::load_corpus_with(&args.human, &config, config.status_filter.human_filter())?;
        let vocab = args
            .train
            .as_ref()
            .map(|path| super::build_train_vocab(path, &config))
            .transpose()?;
        let eval_cfg = super::eval_config(&config);
        let label = args.label.clone().unwrap_or_else(|| {
            args.manifest
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "track".to_string())
        });
        let track = metric_track(
            &label,
            &steps,
            &TrackInputs {
                human: &human,
                train_vocab: vocab.as_ref(),
                stopwords: &stopwords,
                eval: &eval_cfg,
                tokenizer: config.tokenizer,
                status_filter: config.status_filter.generated_filter(),
            },
        )
        .map_err(from_analysis)?;

        // CSV is the plot-ready contract and the default for this command
        let bytes = match args.common.format {
            None | Some(OutputFormat::Csv) => to_csv(&track)?,
            Some(OutputFormat::Json) => {
                let mut inputs = vec![
                    checksum_input("manifest", &args.manifest)?,
                    checksum_input("human", &args.human)?,
                ];
                if let Some(train) = &args.train {
                    inputs.push(checksum_input("train", train)?);
                }
                to_json_bytes(&CurvesDoc {
                    schema_version: SCHEMA_VERSION,
                    config: serde_json::to_value(&config).expect("config serializes"),
                    inputs,
                    track,
                })?
            }
        };
        emit(&bytes, args.common.out.as_deref())
    })
}
