//! Second-order analyses: rank correlation between divergence and task
//! success, rare-word stratification, difficulty bucketing, and
//! epoch/downsizing metric tracks.

mod rare;
mod spearman;
mod track;

pub use rare::{
    default_bucket_edges, difficulty_buckets, rare_word_report, rare_word_set, DifficultyBucket,
    RareWordReport,
};
pub use spearman::spearman;
pub use track::{
    metric_track, parse_manifest, MetricTrack, TrackInputs, TrackPoint, TrackStep,
};

use thiserror::Error;

use crate::corpus::CorpusError;
use crate::divergence::DivergenceError;
use crate::tasksuccess::TaskError;
use crate::textmetrics::MetricError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("input lengths differ: {xs} vs {ys}")]
    LengthMismatch { xs: usize, ys: usize },
    #[error("need at least 3 paired points, got {0}")]
    TooFewPoints(usize),
    #[error("an input is constant; rank correlation is undefined")]
    ConstantInput,
    #[error("inputs contain non-finite values")]
    NonFiniteInput,
    #[error("outcome refers to unknown game {0:?}")]
    Alignment(String),
    #[error("a metric track needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("manifest line {line}: {message}")]
    ManifestParse { line: usize, message: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("step {label:?}: {source}")]
    StepLoad {
        label: String,
        #[source]
        source: CorpusError,
    },
    #[error("step {label:?}: {source}")]
    StepOutcomes {
        label: String,
        #[source]
        source: TaskError,
    },
    #[error("step {label:?}: {source}")]
    StepEval {
        label: String,
        #[source]
        source: MetricError,
    },
    #[error("step {label:?}: {source}")]
    StepDivergence {
        label: String,
        #[source]
        source: DivergenceError,
    },
    #[error("step {label:?}: {source}")]
    StepTask {
        label: String,
        #[source]
        source: TaskError,
    },
}
