//! Run configuration: defaults, the `DIALOMETER_CONFIG` key-value file, and
//! command-line overrides, merged in that order. The resolved config is
//! echoed verbatim into every JSON report for provenance.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dialometer_core::corpus::{SpeakerScope, StatusFilter, TokenizerConfig};
use dialometer_core::textmetrics::Smoothing;
use serde::Serialize;

use crate::failure::{input_msg, Failure};

pub const CONFIG_ENV_VAR: &str = "DIALOMETER_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Which game statuses each loaded corpus keeps. `Default` follows the
/// per-corpus convention: everything for generated corpora, only games
/// played to a decision for human corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusChoice {
    Default,
    All,
    Resolved,
    Success,
    Failure,
    Incomplete,
    Unknown,
}

impl StatusChoice {
    fn explicit(self) -> Option<StatusFilter> {
        use dialometer_core::corpus::GameStatus::*;
        match self {
            StatusChoice::Default => None,
            StatusChoice::All => Some(StatusFilter::All),
            StatusChoice::Resolved => Some(StatusFilter::Resolved),
            StatusChoice::Success => Some(StatusFilter::One(Success)),
            StatusChoice::Failure => Some(StatusFilter::One(Failure)),
            StatusChoice::Incomplete => Some(StatusFilter::One(Incomplete)),
            StatusChoice::Unknown => Some(StatusFilter::One(Unknown)),
        }
    }

    pub fn generated_filter(self) -> StatusFilter {
        self.explicit().unwrap_or(StatusFilter::All)
    }

    pub fn human_filter(self) -> StatusFilter {
        self.explicit().unwrap_or(StatusFilter::Resolved)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Questioner,
    Both,
}

impl From<ScopeArg> for SpeakerScope {
    fn from(arg: ScopeArg) -> Self {
        match arg {
            ScopeArg::Questioner => SpeakerScope::QuestionerOnly,
            ScopeArg::Both => SpeakerScope::Both,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// Stopword file (one lowercase token per line, # comments)
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// BLEU smoothing: `off`, `epsilon`, or `epsilon:<value>`
    #[arg(long, global = true)]
    pub smoothing: Option<String>,
    /// Speaker scope for vocabulary-level metrics
    #[arg(long, global = true, value_enum)]
    pub scope: Option<ScopeArg>,
    /// Status filter applied when loading corpora
    #[arg(long, global = true, value_enum)]
    pub status: Option<StatusChoice>,
    /// Rare-word threshold (strict: count < threshold)
    #[arg(long, global = true)]
    pub threshold: Option<u64>,
    /// Worker threads for per-dialogue fan-out (output is identical at any
    /// setting)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed echoed into reports and used by sampling operations
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format where a command supports both
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Config file; overrides the DIALOMETER_CONFIG environment variable
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Disable lowercasing in the tokenizer
    #[arg(long, global = true)]
    pub no_lowercase: bool,
    /// Keep punctuation attached to tokens
    #[arg(long, global = true)]
    pub keep_punctuation: bool,
}

/// The resolved run configuration, serialized into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tokenizer: TokenizerConfig,
    pub stopword_path: Option<String>,
    pub bleu_smoothing: Smoothing,
    pub rare_threshold: u64,
    pub speaker_scope: SpeakerScope,
    pub status_filter: StatusChoice,
    pub output_format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tokenizer: TokenizerConfig::default(),
            stopword_path: None,
            bleu_smoothing: Smoothing::default(),
            rare_threshold: 15,
            speaker_scope: SpeakerScope::QuestionerOnly,
            status_filter: StatusChoice::Default,
            output_format: OutputFormat::Json,
            seed: 0,
        }
    }
}

fn parse_smoothing(text: &str) -> Result<Smoothing, String> {
    match text {
        "off" => Ok(Smoothing::Off),
        "epsilon" => Ok(Smoothing::Epsilon(0.1)),
        other => match other.strip_prefix("epsilon:") {
            Some(value) => value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .map(Smoothing::Epsilon)
                .ok_or_else(|| format!("bad epsilon value {value:?}")),
            None => Err(format!(
                "unknown smoothing {other:?} (expected off | epsilon | epsilon:<value>)"
            )),
        },
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("{key}: expected a boolean, got {other:?}")),
    }
}

fn apply_config_line(config: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "lowercase" => config.tokenizer.lowercase = parse_bool(key, value)?,
        "strip_punctuation" => config.tokenizer.strip_punctuation = parse_bool(key, value)?,
        "unicode_nfc" => config.tokenizer.unicode_nfc = parse_bool(key, value)?,
        "stopwords" => config.stopword_path = Some(value.to_string()),
        "smoothing" => config.bleu_smoothing = parse_smoothing(value)?,
        "rare_threshold" => {
            config.rare_threshold = value
                .parse()
                .map_err(|_| format!("rare_threshold: bad integer {value:?}"))?
        }
        "scope" => {
            config.speaker_scope = match value {
                "questioner" | "questioner_only" => SpeakerScope::QuestionerOnly,
                "both" => SpeakerScope::Both,
                other => return Err(format!("scope: expected questioner|both, got {other:?}")),
            }
        }
        "status" => {
            config.status_filter = StatusChoice::from_str(value, true)
                .map_err(|_| format!("status: unknown value {value:?}"))?
        }
        "format" => {
            config.output_format = OutputFormat::from_str(value, true)
                .map_err(|_| format!("format: unknown value {value:?}"))?
        }
        "seed" => {
            config.seed = value
                .parse()
                .map_err(|_| format!("seed: bad integer {value:?}"))?
        }
        other => return Err(format!("unknown config key {other:?}")),
    }
    Ok(())
}

fn load_config_file(config: &mut RunConfig, path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_msg(format!("config file {}: {e}", path.display())))?;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            input_msg(format!(
                "config file {} line {}: expected key = value",
                path.display(),
                idx + 1
            ))
        })?;
        apply_config_line(config, key.trim(), value.trim()).map_err(|message| {
            input_msg(format!(
                "config file {} line {}: {message}",
                path.display(),
                idx + 1
            ))
        })?;
    }
    Ok(())
}

/// Defaults, then the config file (``--config`` flag or `DIALOMETER_CONFIG`
/// env var), then command-line flags.
pub fn resolve(common: &CommonOpts) -> Result<RunConfig, Failure> {
    let mut config = RunConfig::default();
    let file = common
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from));
    if let Some(path) = file {
        load_config_file(&mut config, &path)?;
    }
    if let Some(stopwords) = &common.stopwords {
        config.stopword_path = Some(stopwords.display().to_string());
    }
    if let Some(smoothing) = &common.smoothing {
        config.bleu_smoothing = parse_smoothing(smoothing).map_err(input_msg)?;
    }
    if let Some(scope) = common.scope {
        config.speaker_scope = scope.into();
    }
    if let Some(status) = common.status {
        config.status_filter = status;
    }
    if let Some(threshold) = common.threshold {
        config.rare_threshold = threshold;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(format) = common.format {
        config.output_format = format;
    }
    if common.no_lowercase {
        config.tokenizer.lowercase = false;
    }
    if common.keep_punctuation {
        config.tokenizer.strip_punctuation = false;
    }
    Ok(config)
}

/// Runs `body` inside a rayon pool of the requested size. Without the
/// `parallel` feature the flag is accepted and ignored.
pub fn with_jobs<T: Send>(jobs: Option<usize>, body: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = jobs {
        if jobs > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool construction");
            return pool.install(body);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    body()
}
