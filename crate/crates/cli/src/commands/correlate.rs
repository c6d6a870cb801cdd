//! `dialometer correlate`: Spearman rank correlation between two columns of
//! a CSV, e.g. a table of per-system (ld, ts) pairs.

use std::path::PathBuf;

use clap::Args;
use dialometer_core::analysis::spearman;
use serde::Serialize;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{input, input_msg, precondition, Failure};
use crate::report::{checksum_input, emit, sig6, to_json_bytes, InputFile, SCHEMA_VERSION};

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// CSV file with a header row
    pub input: PathBuf,
    /// Column holding the x values
    #[arg(long, default_value = "ld")]
    pub x_col: String,
    /// Column holding the y values
    #[arg(long, default_value = "ts")]
    pub y_col: String,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
struct CorrelateDoc {
    schema_version: u32,
    config: serde_json::Value,
    inputs: Vec<InputFile>,
    x_col: String,
    y_col: String,
    n: usize,
    rho: f64,
    p: f64,
}

pub fn run(args: &CorrelateArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    let mut reader = csv::Reader::from_path(&args.input)
        .map_err(|e| input_msg(format!("{}: {e}", args.input.display())))?;
    let headers = reader.headers().map_err(input)?.clone();
    let column = |name: &str| -> Result<usize, Failure> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                input_msg(format!(
                    "{}: no column named {name:?} (found: {})",
                    args.input.display(),
                    headers.iter().collect::<Vec<_>>().join(", ")
                ))
            })
    };
    let x_idx = column(&args.x_col)?;
    let y_idx = column(&args.y_col)?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(input)?;
        let parse = |idx: usize, name: &str| -> Result<f64, Failure> {
            record
                .get(idx)
                .and_then(|cell| cell.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    input_msg(format!(
                        "{} row {}: column {name:?} is not a number",
                        args.input.display(),
                        row_no + 2
                    ))
                })
        };
        xs.push(parse(x_idx, &args.x_col)?);
        ys.push(parse(y_idx, &args.y_col)?);
    }
    let (rho, p) = spearman(&xs, &ys).map_err(precondition)?;

    let bytes = match config.output_format {
        OutputFormat::Json => to_json_bytes(&CorrelateDoc {
            schema_version: SCHEMA_VERSION,
            config: serde_json::to_value(&config).expect("config serializes"),
            inputs: vec![checksum_input("pairs", &args.input)?],
            x_col: args.x_col.clone(),
            y_col: args.y_col.clone(),
            n: xs.len(),
            rho,
            p,
        })?,
        OutputFormat::Csv => format!("rho,p\n{},{}\n", sig6(rho), sig6(p)).into_bytes(),
    };
    emit(&bytes, args.common.out.as_deref())
}
