//! Report document schema, float formatting, checksums, and output helpers.
//!
//! Reports are JSON with `schema_version` 1. Metric fields are optional on
//! the way in so pre-filled rows (e.g. published table values) parse, and
//! floats are rounded to 6 significant digits on the way out so identical
//! runs produce byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use dialometer_core::divergence::{LdBreakdown, MetricValues};
use dialometer_core::tasksuccess::TurnPoint;
use dialometer_core::textmetrics::MetricReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::failure::{input, input_msg, Failure};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputFile {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

pub fn checksum_input(role: &str, path: &Path) -> Result<InputFile, Failure> {
    let bytes =
        fs::read(path).map_err(|e| input_msg(format!("{role} {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(InputFile {
        role: role.to_string(),
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    })
}

/// A metric row in which any value may be absent — what a comparison table
/// consumes. Full reports from `eval` are a superset of this shape.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LooseMetrics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_dialogues: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lrd: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl From<&MetricReport> for LooseMetrics {
    fn from(report: &MetricReport) -> Self {
        LooseMetrics {
            corpus_id: Some(report.corpus_id.clone()),
            n_dialogues: Some(report.n_dialogues),
            h: Some(report.h),
            mo: Some(report.mo),
            grq: Some(report.grq),
            gr: report.gr,
            lrd: report.lrd,
            extras: report.extras.clone(),
        }
    }
}

impl LooseMetrics {
    pub fn to_values(&self) -> MetricValues {
        MetricValues {
            h: self.h,
            mo: self.mo,
            grq: self.grq,
            gr: self.gr,
            lrd: self.lrd,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mpr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_turn_acc: Option<Vec<TurnPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_turn_mpr: Option<Vec<TurnPoint>>,
}

impl TsSection {
    pub fn is_empty(&self) -> bool {
        self.acc.is_none()
            && self.mpr.is_none()
            && self.per_turn_acc.is_none()
            && self.per_turn_mpr.is_none()
    }

    /// Scalar task success, accuracy preferred.
    pub fn scalar(&self) -> Option<f64> {
        self.acc.or(self.mpr)
    }
}

/// The `eval` report document; also the row/anchor schema for `table`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputFile>,
    pub corpus: LooseMetrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human: Option<LooseMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ld: Option<LdBreakdown>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ts: Option<TsSection>,
}

impl ReportDoc {
    pub fn new(config: &RunConfig, inputs: Vec<InputFile>, corpus: LooseMetrics) -> Self {
        ReportDoc {
            schema_version: SCHEMA_VERSION,
            task: None,
            config: Some(serde_json::to_value(config).expect("config serializes")),
            inputs,
            corpus,
            human: None,
            ld: None,
            ts: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| input_msg(format!("report {}: {e}", path.display())))?;
        let doc: ReportDoc = serde_json::from_str(&text)
            .map_err(|e| input_msg(format!("report {}: {e}", path.display())))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(input_msg(format!(
                "report {}: unsupported schema_version {}",
                path.display(),
                doc.schema_version
            )));
        }
        Ok(doc)
    }
}

/// Rounds to 6 significant digits. Exact zero, infinities, and NaN pass
/// through unchanged.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor();
    let scale = 10f64.powf(5.0 - magnitude);
    (x * scale).round() / scale
}

/// Recursively rounds every fractional JSON number to 6 significant digits.
/// Integer-valued numbers are left untouched.
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(number) => {
            if let Some(x) = number.as_f64() {
                if number.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig6(x)) {
                        *number = rounded;
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Serializes a document as pretty JSON with rounded floats and a trailing
/// newline — the stable on-disk report format.
pub fn to_json_bytes<T: Serialize>(doc: &T) -> Result<Vec<u8>, Failure> {
    let mut value = serde_json::to_value(doc)
        .map_err(|e| crate::failure::internal(format!("serialization failed: {e}")))?;
    round_floats(&mut value);
    let mut bytes = serde_json::to_vec_pretty(&value)
        .map_err(|e| crate::failure::internal(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Flattens a JSON document into `key,value` CSV rows (dotted paths, arrays
/// indexed), for commands asked to emit CSV from a nested report.
pub fn to_flat_csv<T: Serialize>(doc: &T) -> Result<Vec<u8>, Failure> {
    let mut value = serde_json::to_value(doc)
        .map_err(|e| crate::failure::internal(format!("serialization failed: {e}")))?;
    round_floats(&mut value);
    let mut rows = Vec::new();
    flatten(&value, String::new(), &mut rows);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["key", "value"])
        .map_err(|e| crate::failure::internal(e.to_string()))?;
    for (key, rendered) in rows {
        writer
            .write_record([key.as_str(), rendered.as_str()])
            .map_err(|e| crate::failure::internal(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| crate::failure::internal(e.to_string()))
}

fn flatten(value: &Value, prefix: String, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (key, child) in map {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(child, path, rows);
            }
        }
        Value::Array(items) => {
            for (index, child) in items.iter().enumerate() {
                flatten(child, format!("{prefix}[{index}]"), rows);
            }
        }
        Value::Null => rows.push((prefix, String::new())),
        Value::Bool(b) => rows.push((prefix, b.to_string())),
        Value::Number(n) => rows.push((prefix, n.to_string())),
        Value::String(s) => rows.push((prefix, s.clone())),
    }
}

/// Writes bytes to `--out` or stdout.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| input_msg(format!("writing {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| input(anyhow::Error::new(e).context("writing to stdout"))),
    }
}
