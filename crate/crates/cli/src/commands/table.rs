//! `dialometer table`: assemble metric reports into a comparison table,
//! recomputing each row's LD against the shared human anchor.

use std::path::{Path, PathBuf};

use clap::Args;
use dialometer_core::divergence::linguistic_divergence;
use serde::Serialize;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{input_msg, Failure};
use crate::report::{
    checksum_input, emit, sig6, to_json_bytes, InputFile, LooseMetrics, ReportDoc, SCHEMA_VERSION,
};

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Human anchor report (the same schema `eval` writes)
    #[arg(long)]
    pub human: PathBuf,
    /// Row report files, one system each
    #[arg(required = true)]
    pub rows: Vec<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct TableRow {
    system: String,
    h: Option<f64>,
    mo: Option<f64>,
    grq: Option<f64>,
    gr: Option<f64>,
    lrd: Option<f64>,
    ld: Option<f64>,
    ts: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TableDoc {
    schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    task: Option<String>,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    rows: Vec<TableRow>,
}

fn system_name(doc: &ReportDoc, path: &Path) -> String {
    doc.corpus.corpus_id.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string())
    })
}

fn make_row(system: String, metrics: &LooseMetrics, ld: Option<f64>, ts: Option<f64>) -> TableRow {
    TableRow {
        system,
        h: metrics.h,
        mo: metrics.mo,
        grq: metrics.grq,
        gr: metrics.gr,
        lrd: metrics.lrd,
        ld,
        ts,
    }
}

fn cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{}", sig6(v)),
        None => "-".to_string(),
    }
}

pub fn run(args: &TableArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    let human_doc = ReportDoc::load(&args.human)?;
    let human_values = human_doc.corpus.to_values();

    let mut inputs = vec![checksum_input("human", &args.human)?];
    let mut rows = Vec::new();
    for path in &args.rows {
        let doc = ReportDoc::load(path)?;
        if doc.task != human_doc.task {
            return Err(input_msg(format!(
                "report {}: task {:?} does not match the human anchor's {:?}",
                path.display(),
                doc.task,
                human_doc.task
            )));
        }
        inputs.push(checksum_input("row", path)?);
        let ld = linguistic_divergence(&doc.corpus.to_values(), &human_values)
            .ok()
            .map(|b| b.ld);
        let ts = doc.ts.as_ref().and_then(|ts| ts.scalar());
        rows.push(make_row(system_name(&doc, path), &doc.corpus, ld, ts));
    }
    // the anchor itself closes the table, mirroring published "Hum" rows
    let human_ts = human_doc.ts.as_ref().and_then(|ts| ts.scalar());
    rows.push(make_row(
        system_name(&human_doc, &args.human),
        &human_doc.corpus,
        None,
        human_ts,
    ));

    let bytes = match config.output_format {
        OutputFormat::Json => to_json_bytes(&TableDoc {
            schema_version: SCHEMA_VERSION,
            task: human_doc.task.clone(),
            config: serde_json::to_value(&config).expect("config serializes"),
            inputs,
            rows,
        })?,
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(["system", "h", "mo", "grq", "gr", "lrd", "ld", "ts"])
                .map_err(|e| crate::failure::internal(e.to_string()))?;
            for row in &rows {
                writer
                    .write_record([
                        row.system.clone(),
                        cell(row.h),
                        cell(row.mo),
                        cell(row.grq),
                        cell(row.gr),
                        cell(row.lrd),
                        cell(row.ld),
                        cell(row.ts),
                    ])
                    .map_err(|e| crate::failure::internal(e.to_string()))?;
            }
            writer
                .into_inner()
                .map_err(|e| crate::failure::internal(e.to_string()))?
        }
    };
    emit(&bytes, args.common.out.as_deref())
}
