//! Metric tracks: the same evaluation run over an ordered series of corpora
//! (training epochs, downsized datasets) with per-metric max-normalization
//! so differently scaled metrics fit one plot.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{
    load_corpus, Corpus, StatusFilter, StopwordSet, TokenizerConfig, Vocabulary,
};
use crate::divergence::{linguistic_divergence, MetricValues};
use crate::tasksuccess::{
    accuracy, load_outcomes, mean_percentile_rank, OutcomesFile,
};
use crate::textmetrics::{evaluate_corpus, EvalConfig};

use super::AnalysisError;

/// One entry of a track manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackStep {
    /// Epoch tag or downsizing-fraction tag ("5", "25pct", ...).
    pub step: String,
    pub corpus_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes_path: Option<PathBuf>,
}

/// One `(step, metric)` sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub step: String,
    pub metric: String,
    pub raw: f64,
    /// `raw / max(raw over the track for this metric)`, in [0, 1].
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTrack {
    pub label: String,
    pub points: Vec<TrackPoint>,
}

/// Shared references every step is evaluated against.
pub struct TrackInputs<'a> {
    pub human: &'a Corpus,
    pub train_vocab: Option<&'a Vocabulary>,
    pub stopwords: &'a StopwordSet,
    pub eval: &'a EvalConfig,
    pub tokenizer: TokenizerConfig,
    pub status_filter: StatusFilter,
}

/// Parses a TSV manifest: `step<TAB>corpus_path[<TAB>outcomes_path]` per
/// line, `#` comments and blank lines skipped.
pub fn parse_manifest(path: &Path) -> Result<Vec<TrackStep>, AnalysisError> {
    let text = fs::read_to_string(path).map_err(|source| AnalysisError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut steps = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 2 || fields.len() > 3 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(AnalysisError::ManifestParse {
                line: line_no,
                message: "expected step<TAB>corpus_path[<TAB>outcomes_path]".to_string(),
            });
        }
        steps.push(TrackStep {
            step: fields[0].to_string(),
            corpus_path: PathBuf::from(fields[1]),
            outcomes_path: fields.get(2).map(PathBuf::from),
        });
    }
    Ok(steps)
}

/// Evaluates every step's corpus against the shared human anchor and emits
/// raw plus max-normalized series for h, mo, grq, gr, lrd, ld, and ts.
///
/// `ts` is accuracy when the step's outcomes all carry `correct`, otherwise
/// mean percentile rank. When a metric's maximum over the track is 0 its
/// normalized values are reported as 0.
pub fn metric_track(
    label: &str,
    steps: &[TrackStep],
    inputs: &TrackInputs<'_>,
) -> Result<MetricTrack, AnalysisError> {
    if steps.len() < 2 {
        return Err(AnalysisError::TooFewSteps(steps.len()));
    }
    let human_report = evaluate_corpus(
        inputs.human,
        None,
        inputs.train_vocab,
        inputs.stopwords,
        inputs.eval,
    )
    .map_err(|source| AnalysisError::StepEval {
        label: "human anchor".to_string(),
        source,
    })?;
    let human_values = MetricValues::from(&human_report);

    let mut raw_points: Vec<(String, String, f64)> = Vec::new();
    for step in steps {
        let corpus = load_corpus(&step.corpus_path, inputs.tokenizer, inputs.status_filter)
            .map_err(|source| AnalysisError::StepLoad {
                label: step.step.clone(),
                source,
            })?;
        let report = evaluate_corpus(
            &corpus,
            Some(inputs.human),
            inputs.train_vocab,
            inputs.stopwords,
            inputs.eval,
        )
        .map_err(|source| AnalysisError::StepEval {
            label: step.step.clone(),
            source,
        })?;
        let breakdown = linguistic_divergence(&MetricValues::from(&report), &human_values)
            .map_err(|source| AnalysisError::StepDivergence {
                label: step.step.clone(),
                source,
            })?;

        let mut push = |metric: &str, value: f64| {
            raw_points.push((step.step.clone(), metric.to_string(), value));
        };
        if let Some(outcomes_path) = &step.outcomes_path {
            let outcomes =
                load_outcomes(outcomes_path).map_err(|source| AnalysisError::StepOutcomes {
                    label: step.step.clone(),
                    source,
                })?;
            let ts = match &outcomes {
                OutcomesFile::Games(games) if games.iter().all(|g| g.correct.is_some()) => {
                    accuracy(games)
                }
                OutcomesFile::Games(games) => mean_percentile_rank(games),
                OutcomesFile::Turns(_) => {
                    return Err(AnalysisError::StepOutcomes {
                        label: step.step.clone(),
                        source: crate::tasksuccess::TaskError::MalformedLine {
                            line: 0,
                            message: "per-turn streams are not usable as a track TS".to_string(),
                        },
                    })
                }
            }
            .map_err(|source| AnalysisError::StepTask {
                label: step.step.clone(),
                source,
            })?;
            push("ts", ts);
        }
        push("h", report.h);
        push("mo", report.mo);
        push("grq", report.grq);
        if let Some(gr) = report.gr {
            push("gr", gr);
        }
        if let Some(lrd) = report.lrd {
            push("lrd", lrd);
        }
        push("ld", breakdown.ld);
    }

    let metrics: BTreeSet<&str> = raw_points.iter().map(|(_, m, _)| m.as_str()).collect();
    let mut maxima = std::collections::BTreeMap::new();
    for metric in metrics {
        let max = raw_points
            .iter()
            .filter(|(_, m, _)| m == metric)
            .map(|(_, _, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        maxima.insert(metric.to_string(), max);
    }
    let points = raw_points
        .into_iter()
        .map(|(step, metric, raw)| {
            let max = maxima[&metric];
            let normalized = if max > 0.0 { raw / max } else { 0.0 };
            TrackPoint {
                step,
                metric,
                raw,
                normalized,
            }
        })
        .collect();
    Ok(MetricTrack {
        label: label.to_string(),
        points,
    })
}
