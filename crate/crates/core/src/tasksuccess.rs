//! Task-success metrics over ingested game outcomes: accuracy, mean
//! percentile rank, chance levels, and by-turn success curves. Ranks and
//! correctness are read from outcome files, never computed from model state.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed outcome: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("line {line}: mixes per-game and per-turn records")]
    MixedStream { line: usize },
    #[error("no outcomes given")]
    EmptyInput,
    #[error("game {game_id:?} is missing the {field} field required here")]
    MissingField { game_id: String, field: &'static str },
    #[error("game {game_id:?}: rank {rank} outside 1..={n}")]
    RankOutOfRange { game_id: String, rank: u32, n: u32 },
    #[error("game {game_id:?}: invalid outcome: {message}")]
    InvalidOutcome { game_id: String, message: String },
}

/// How one game ended for the guesser. `correct` serves accuracy tasks,
/// `rank` serves ranking tasks; at least one must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub game_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
    /// 1-based rank of the target among the candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    pub n_candidates: u32,
}

/// A guess evaluated after a given number of dialogue turns. Turn 0 means
/// caption-only guessing with no dialogue history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnPrediction {
    pub game_id: String,
    pub turn_index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correct: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    pub n_candidates: u32,
}

fn validate_outcome(
    game_id: &str,
    correct: Option<bool>,
    rank: Option<u32>,
    n_candidates: u32,
) -> Result<(), TaskError> {
    if correct.is_none() && rank.is_none() {
        return Err(TaskError::InvalidOutcome {
            game_id: game_id.to_string(),
            message: "neither correct nor rank present".to_string(),
        });
    }
    if n_candidates < 2 {
        return Err(TaskError::InvalidOutcome {
            game_id: game_id.to_string(),
            message: format!("n_candidates = {n_candidates} must be at least 2"),
        });
    }
    if let Some(rank) = rank {
        if rank < 1 || rank > n_candidates {
            return Err(TaskError::RankOutOfRange {
                game_id: game_id.to_string(),
                rank,
                n: n_candidates,
            });
        }
    }
    Ok(())
}

impl GameOutcome {
    pub fn validate(&self) -> Result<(), TaskError> {
        validate_outcome(&self.game_id, self.correct, self.rank, self.n_candidates)
    }
}

impl TurnPrediction {
    pub fn validate(&self) -> Result<(), TaskError> {
        validate_outcome(&self.game_id, self.correct, self.rank, self.n_candidates)
    }
}

/// Contents of an outcomes file: per-game outcomes, or per-turn predictions
/// when the lines carry a `turn` field.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomesFile {
    Games(Vec<GameOutcome>),
    Turns(Vec<TurnPrediction>),
}

#[derive(Deserialize)]
struct OutcomeLine {
    game_id: String,
    #[serde(default)]
    correct: Option<bool>,
    #[serde(default)]
    rank: Option<u32>,
    n_candidates: u32,
    #[serde(default)]
    turn: Option<u32>,
}

/// Loads a JSON-Lines outcomes file. A `turn` field on any line makes the
/// whole file a per-turn prediction stream; mixing the two forms is an
/// error. Every record is validated on load.
pub fn load_outcomes(path: &Path) -> Result<OutcomesFile, TaskError> {
    let file = File::open(path).map_err(|source| TaskError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_outcomes_from_reader(BufReader::new(file))
}

/// Same as [`load_outcomes`], from any buffered reader.
pub fn load_outcomes_from_reader<R: BufRead>(reader: R) -> Result<OutcomesFile, TaskError> {
    let mut games: Vec<GameOutcome> = Vec::new();
    let mut turns: Vec<TurnPrediction> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| TaskError::Io {
            path: format!("line {line_no}"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: OutcomeLine =
            serde_json::from_str(&line).map_err(|e| TaskError::MalformedLine {
                line: line_no,
                message: e.to_string(),
            })?;
        validate_outcome(&parsed.game_id, parsed.correct, parsed.rank, parsed.n_candidates)?;
        match parsed.turn {
            Some(turn_index) => {
                if !games.is_empty() {
                    return Err(TaskError::MixedStream { line: line_no });
                }
                turns.push(TurnPrediction {
                    game_id: parsed.game_id,
                    turn_index,
                    correct: parsed.correct,
                    rank: parsed.rank,
                    n_candidates: parsed.n_candidates,
                });
            }
            None => {
                if !turns.is_empty() {
                    return Err(TaskError::MixedStream { line: line_no });
                }
                games.push(GameOutcome {
                    game_id: parsed.game_id,
                    correct: parsed.correct,
                    rank: parsed.rank,
                    n_candidates: parsed.n_candidates,
                });
            }
        }
    }
    if turns.is_empty() {
        Ok(OutcomesFile::Games(games))
    } else {
        Ok(OutcomesFile::Turns(turns))
    }
}

/// Percent of outcomes marked correct. Every outcome must carry `correct`.
pub fn accuracy(outcomes: &[GameOutcome]) -> Result<f64, TaskError> {
    if outcomes.is_empty() {
        return Err(TaskError::EmptyInput);
    }
    let mut correct = 0u64;
    for outcome in outcomes {
        match outcome.correct {
            Some(true) => correct += 1,
            Some(false) => {}
            None => {
                return Err(TaskError::MissingField {
                    game_id: outcome.game_id.clone(),
                    field: "correct",
                })
            }
        }
    }
    Ok(correct as f64 * 100.0 / outcomes.len() as f64)
}

/// Which denominator the percentile uses. `N` makes the worked example
/// "rank 80 of 2000 = 96% and ±20 ranks = ∓1%" exact; `NMinusOne` maps
/// rank 1 to exactly 100.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankDivisor {
    #[default]
    N,
    NMinusOne,
}

/// Percent of candidates ranked strictly below the target:
/// `100 * (n - rank) / n`. Note rank 1 maps to `100 * (n-1)/n`, not 100.
pub fn percentile_rank(rank: u32, n: u32) -> Result<f64, TaskError> {
    percentile_rank_with(rank, n, RankDivisor::N)
}

/// [`percentile_rank`] with an explicit denominator choice.
pub fn percentile_rank_with(rank: u32, n: u32, divisor: RankDivisor) -> Result<f64, TaskError> {
    if rank < 1 || rank > n {
        return Err(TaskError::RankOutOfRange {
            game_id: String::new(),
            rank,
            n,
        });
    }
    // Multiply before dividing: both operands are exact small integers, so
    // quotients like 1920*100/2000 come out exact in f64.
    let below = f64::from(n - rank) * 100.0;
    Ok(match divisor {
        RankDivisor::N => below / f64::from(n),
        RankDivisor::NMinusOne => below / f64::from(n - 1),
    })
}

/// Mean per-game percentile rank. Every outcome must carry `rank`.
pub fn mean_percentile_rank(outcomes: &[GameOutcome]) -> Result<f64, TaskError> {
    mean_percentile_rank_with(outcomes, RankDivisor::N)
}

/// [`mean_percentile_rank`] with an explicit denominator choice.
pub fn mean_percentile_rank_with(
    outcomes: &[GameOutcome],
    divisor: RankDivisor,
) -> Result<f64, TaskError> {
    if outcomes.is_empty() {
        return Err(TaskError::EmptyInput);
    }
    let mut sum = 0.0;
    for outcome in outcomes {
        let rank = outcome.rank.ok_or_else(|| TaskError::MissingField {
            game_id: outcome.game_id.clone(),
            field: "rank",
        })?;
        sum += percentile_rank_with(rank, outcome.n_candidates, divisor)?;
    }
    Ok(sum / outcomes.len() as f64)
}

/// The guessing task shape, for chance-level baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChanceTask {
    /// Pick one of `k` candidates; chance accuracy is `100 / k`.
    FixedCandidates(u32),
    /// Rank `n` candidates; chance MPR is 50%.
    Ranking(u32),
}

pub fn chance_level(task: ChanceTask) -> f64 {
    match task {
        ChanceTask::FixedCandidates(k) => 100.0 / f64::from(k),
        ChanceTask::Ranking(_) => 50.0,
    }
}

/// Chance accuracy when the candidate count varies per game: the mean of
/// `100 / k` over games.
pub fn chance_level_per_game(candidate_counts: &[u32]) -> Result<f64, TaskError> {
    if candidate_counts.is_empty() {
        return Err(TaskError::EmptyInput);
    }
    let sum: f64 = candidate_counts.iter().map(|&k| 100.0 / f64::from(k)).sum();
    Ok(sum / candidate_counts.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    Accuracy,
    Mpr,
}

/// One point of a by-turn success curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnPoint {
    pub turn_index: u32,
    pub value: f64,
    pub n_games: usize,
}

/// Success per turn index, ascending. Each point is the accuracy or MPR of
/// exactly the predictions at that index, so a game lacking a turn simply
/// contributes nothing there.
pub fn per_turn_curve(
    predictions: &[TurnPrediction],
    mode: CurveMode,
) -> Result<Vec<TurnPoint>, TaskError> {
    if predictions.is_empty() {
        return Err(TaskError::EmptyInput);
    }
    let mut by_turn: BTreeMap<u32, Vec<&TurnPrediction>> = BTreeMap::new();
    for prediction in predictions {
        by_turn.entry(prediction.turn_index).or_default().push(prediction);
    }
    let mut curve = Vec::with_capacity(by_turn.len());
    for (turn_index, slice) in by_turn {
        let mut sum = 0.0;
        for prediction in &slice {
            match mode {
                CurveMode::Accuracy => {
                    let correct = prediction.correct.ok_or_else(|| TaskError::MissingField {
                        game_id: prediction.game_id.clone(),
                        field: "correct",
                    })?;
                    if correct {
                        sum += 100.0;
                    }
                }
                CurveMode::Mpr => {
                    let rank = prediction.rank.ok_or_else(|| TaskError::MissingField {
                        game_id: prediction.game_id.clone(),
                        field: "rank",
                    })?;
                    sum += percentile_rank(rank, prediction.n_candidates)?;
                }
            }
        }
        curve.push(TurnPoint {
            turn_index,
            value: sum / slice.len() as f64,
            n_games: slice.len(),
        });
    }
    Ok(curve)
}
