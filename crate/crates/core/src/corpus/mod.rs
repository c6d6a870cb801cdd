//! Dialogue corpora: domain types, JSON-Lines I/O, tokenization,
//! vocabularies, stopwords, and deterministic subsampling.
//!
//! A corpus is immutable after load; every downstream operation is a pure
//! read, so corpora can be shared freely across worker threads.

mod stopwords;
mod tokenize;
mod vocab;

pub use stopwords::StopwordSet;
pub use tokenize::tokenize;
pub use vocab::{build_vocabulary, content_words, Vocabulary};

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate game_id {0:?}")]
    DuplicateGameId(String),
    #[error("game {0:?}: target_id is not among the candidate ids")]
    TargetNotInCandidates(String),
    #[error("game {0:?}: duplicate candidate id")]
    DuplicateCandidateId(String),
    #[error("game {0:?}: dialogue has no turns")]
    EmptyDialogue(String),
    #[error("game {0:?}: pos tag list length does not match token count")]
    PosTagMismatch(String),
    #[error("selected speaker scope produced no countable tokens")]
    EmptyScope,
}

/// Which side of the dialogue produced a turn. Symmetric games map their two
/// agents onto `Questioner`/`Answerer` at conversion time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Speaker {
    #[serde(rename = "Q")]
    Questioner,
    #[serde(rename = "A")]
    Answerer,
}

/// Speakers whose tokens participate in vocabulary-level metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeakerScope {
    QuestionerOnly,
    Both,
}

impl SpeakerScope {
    pub fn admits(self, speaker: Speaker) -> bool {
        match self {
            SpeakerScope::QuestionerOnly => speaker == Speaker::Questioner,
            SpeakerScope::Both => true,
        }
    }
}

/// One utterance. `tokens` is always exactly `tokenize(text)` under the
/// owning corpus's tokenizer config; it is rebuilt at load time and never
/// serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub text: String,
    #[serde(skip)]
    pub tokens: Vec<String>,
    #[serde(rename = "pos", default, skip_serializing_if = "Option::is_none")]
    pub pos_tags: Option<Vec<String>>,
    /// Unknown wire fields (including the reserved per-turn `embedding`)
    /// survive a round-trip but are otherwise ignored.
    #[serde(flatten, default, skip_serializing_if = "Map::is_empty")]
    pub extra: Map<String, Value>,
}

impl Turn {
    pub fn new(speaker: Speaker, text: impl Into<String>) -> Self {
        Turn {
            speaker,
            text: text.into(),
            tokens: Vec::new(),
            pos_tags: None,
            extra: Map::new(),
        }
    }

    pub fn is_question(&self) -> bool {
        self.speaker == Speaker::Questioner
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    /// `[x, y, w, h]` in image pixels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 4]>,
    #[serde(flatten, default, skip_serializing_if = "Map::is_empty")]
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameStatus {
    Success,
    Failure,
    Incomplete,
    #[default]
    Unknown,
}

impl GameStatus {
    fn is_unknown(&self) -> bool {
        *self == GameStatus::Unknown
    }
}

/// Which game statuses a loader keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusFilter {
    All,
    /// Success and Failure only — games that were played to a decision.
    Resolved,
    One(GameStatus),
}

impl StatusFilter {
    pub fn admits(self, status: GameStatus) -> bool {
        match self {
            StatusFilter::All => true,
            StatusFilter::Resolved => {
                matches!(status, GameStatus::Success | GameStatus::Failure)
            }
            StatusFilter::One(s) => status == s,
        }
    }
}

/// One played game: the candidate set, the target, the dialogue, and how the
/// game ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub game_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
    /// May be empty for text-only or ranking games.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_id: Option<String>,
    pub turns: Vec<Turn>,
    #[serde(default, skip_serializing_if = "GameStatus::is_unknown")]
    pub status: GameStatus,
    #[serde(flatten, default, skip_serializing_if = "Map::is_empty")]
    pub extra: Map<String, Value>,
}

impl GameRecord {
    pub fn questions(&self) -> impl Iterator<Item = &Turn> {
        self.turns.iter().filter(|t| t.is_question())
    }

    pub fn question_count(&self) -> usize {
        self.questions().count()
    }

    /// Candidates sharing the target's category, target excluded. `None`
    /// when the record lacks a target or categories.
    pub fn same_category_distractors(&self) -> Option<usize> {
        let target_id = self.target_id.as_deref()?;
        let target = self.candidates.iter().find(|c| c.id == target_id)?;
        let category = target.category.as_deref()?;
        let sharing = self
            .candidates
            .iter()
            .filter(|c| c.category.as_deref() == Some(category))
            .count();
        Some(sharing.saturating_sub(1))
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.turns.is_empty() {
            return Err(CorpusError::EmptyDialogue(self.game_id.clone()));
        }
        let mut seen = HashSet::new();
        for candidate in &self.candidates {
            if candidate.id.is_empty() || !seen.insert(candidate.id.as_str()) {
                return Err(CorpusError::DuplicateCandidateId(self.game_id.clone()));
            }
        }
        if let Some(target) = &self.target_id {
            if !self.candidates.is_empty() && !seen.contains(target.as_str()) {
                return Err(CorpusError::TargetNotInCandidates(self.game_id.clone()));
            }
        }
        Ok(())
    }

    fn retokenize(&mut self, config: &TokenizerConfig) -> Result<(), CorpusError> {
        for turn in &mut self.turns {
            turn.tokens = tokenize(&turn.text, config);
            if let Some(pos) = &turn.pos_tags {
                if pos.len() != turn.tokens.len() {
                    return Err(CorpusError::PosTagMismatch(self.game_id.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Tokenizer knobs. Deterministic: same text and config always yield the
/// same tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Treat punctuation as token boundaries and drop it, keeping
    /// apostrophes that sit between word characters (`it's`).
    pub strip_punctuation: bool,
    pub unicode_nfc: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            strip_punctuation: true,
            unicode_nfc: true,
        }
    }
}

/// An ordered, immutable collection of games plus the tokenizer they were
/// tokenized with.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    corpus_id: String,
    records: Vec<GameRecord>,
    tokenizer: TokenizerConfig,
}

impl Corpus {
    /// Builds a corpus from in-memory records, re-tokenizing every turn and
    /// enforcing record invariants (unique game ids, non-empty dialogues,
    /// targets among candidates, pos/token length agreement).
    pub fn from_records(
        corpus_id: impl Into<String>,
        mut records: Vec<GameRecord>,
        tokenizer: TokenizerConfig,
    ) -> Result<Self, CorpusError> {
        let mut ids = HashSet::new();
        for record in &records {
            if !ids.insert(record.game_id.as_str()) {
                return Err(CorpusError::DuplicateGameId(record.game_id.clone()));
            }
        }
        for record in &mut records {
            record.validate()?;
            record.retokenize(&tokenizer)?;
        }
        Ok(Corpus {
            corpus_id: corpus_id.into(),
            records,
            tokenizer,
        })
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    pub fn records(&self) -> &[GameRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tokenizer(&self) -> TokenizerConfig {
        self.tokenizer
    }

    /// Number of questioner turns per game, in corpus order.
    pub fn question_counts(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.question_count()).collect()
    }

    /// All tokens of turns admitted by `scope`, in corpus order.
    pub fn scoped_tokens(&self, scope: SpeakerScope) -> impl Iterator<Item = &str> {
        self.records
            .iter()
            .flat_map(|r| r.turns.iter())
            .filter(move |t| scope.admits(t.speaker))
            .flat_map(|t| t.tokens.iter().map(String::as_str))
    }

    /// Serializes the corpus back to JSON-Lines, one game per line. Unknown
    /// input fields captured at load time are written back out.
    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut writer, record)?;
            writer.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Loads a JSON-Lines corpus file, one game per line.
///
/// Every parsed record is validated before the status filter is applied, so
/// a file with e.g. duplicate game ids is rejected even when the duplicates
/// would have been filtered out. Blank lines are skipped.
pub fn load_corpus(
    path: &Path,
    config: TokenizerConfig,
    filter: StatusFilter,
) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let corpus_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    load_corpus_from_reader(corpus_id, BufReader::new(file), config, filter)
}

/// Same as [`load_corpus`], from any buffered reader.
pub fn load_corpus_from_reader<R: BufRead>(
    corpus_id: impl Into<String>,
    reader: R,
    config: TokenizerConfig,
    filter: StatusFilter,
) -> Result<Corpus, CorpusError> {
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: format!("line {line_no}"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: GameRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::MalformedLine {
                line: line_no,
                message: e.to_string(),
            })?;
        if record.game_id.is_empty() {
            return Err(CorpusError::MalformedLine {
                line: line_no,
                message: "empty game_id".to_string(),
            });
        }
        if !ids.insert(record.game_id.clone()) {
            return Err(CorpusError::DuplicateGameId(record.game_id));
        }
        record.validate()?;
        records.push(record);
    }
    let mut kept: Vec<GameRecord> = records
        .into_iter()
        .filter(|r| filter.admits(r.status))
        .collect();
    for record in &mut kept {
        record.retokenize(&config)?;
    }
    Ok(Corpus {
        corpus_id: corpus_id.into(),
        records: kept,
        tokenizer: config,
    })
}

/// Deterministic pseudo-random subsample of `ceil(fraction * N)` records
/// without replacement. Record order is preserved and the same
/// `(corpus, fraction, seed)` triple always selects the same games.
///
/// # Panics
/// Panics when `fraction` is outside `(0, 1]`.
pub fn subsample(corpus: &Corpus, fraction: f64, seed: u64) -> Corpus {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "fraction must be in (0, 1], got {fraction}"
    );
    let n = corpus.records.len();
    let k = ((fraction * n as f64).ceil() as usize).min(n);
    // Partial Fisher-Yates over the index vector; hand-rolled so the
    // selection does not depend on rand's sampling internals.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
    }
    let mut chosen: Vec<usize> = indices[..k].to_vec();
    chosen.sort_unstable();
    let records = chosen
        .into_iter()
        .map(|i| corpus.records[i].clone())
        .collect();
    Corpus {
        corpus_id: corpus.corpus_id.clone(),
        records,
        tokenizer: corpus.tokenizer,
    }
}
