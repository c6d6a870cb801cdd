//! Rare-word stratification and dialogue-difficulty buckets.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, GameRecord, Vocabulary};
use crate::par::ordered_map;
use crate::tasksuccess::GameOutcome;

use super::AnalysisError;

/// Training words used strictly fewer than `threshold` times.
pub fn rare_word_set(train_vocab: &Vocabulary, threshold: u64) -> BTreeSet<String> {
    train_vocab
        .tokens()
        .filter(|t| train_vocab.count(t) < threshold)
        .map(str::to_string)
        .collect()
}

/// How rare training words interact with game difficulty and outcomes.
/// Fields that the given inputs cannot determine stay `None`: the accuracy
/// split and failed-game coverage need outcomes with `correct`, the POS
/// distribution needs pre-tagged turns, and the vocabulary fraction needs
/// the caller to know the vocabulary size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RareWordReport {
    pub threshold: u64,
    pub rare_set_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rare_fraction_of_vocab: Option<f64>,
    /// Percent of games whose dialogue uses at least one rare word.
    pub games_with_rare: f64,
    /// Mean question count of games with (resp. without) rare words.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_turns_with_rare: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_turns_without_rare: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acc_with_rare: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acc_without_rare: Option<f64>,
    /// Percent of the rare word types occurring in this corpus that show up
    /// in at least one game the model failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rare_words_in_failed_games: Option<f64>,
    /// POS tag -> percent over tagged rare-word occurrences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos_distribution: Option<BTreeMap<String, f64>>,
}

struct GameRareStats<'a> {
    game_id: &'a str,
    question_count: usize,
    rare_types: BTreeSet<&'a str>,
    pos_counts: BTreeMap<&'a str, u64>,
}

fn game_rare_stats<'a>(game: &'a GameRecord, rare: &BTreeSet<String>) -> GameRareStats<'a> {
    let mut rare_types = BTreeSet::new();
    let mut pos_counts = BTreeMap::new();
    for turn in &game.turns {
        for (i, token) in turn.tokens.iter().enumerate() {
            if rare.contains(token) {
                rare_types.insert(token.as_str());
                if let Some(pos) = &turn.pos_tags {
                    *pos_counts.entry(pos[i].as_str()).or_default() += 1;
                }
            }
        }
    }
    GameRareStats {
        game_id: &game.game_id,
        question_count: game.question_count(),
        rare_types,
        pos_counts,
    }
}

fn correctness_by_game<'a>(
    human: &Corpus,
    outcomes: &'a [GameOutcome],
) -> Result<HashMap<&'a str, Option<bool>>, AnalysisError> {
    let known: HashSet<&str> = human.records().iter().map(|r| r.game_id.as_str()).collect();
    let mut map = HashMap::with_capacity(outcomes.len());
    for outcome in outcomes {
        if !known.contains(outcome.game_id.as_str()) {
            return Err(AnalysisError::Alignment(outcome.game_id.clone()));
        }
        map.insert(outcome.game_id.as_str(), outcome.correct);
    }
    Ok(map)
}

fn mean(sum: f64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum / n as f64)
}

/// Stratifies the corpus's games by rare-word usage (a game counts as rare
/// when any of its turns uses a word from `rare`) and, when outcomes are
/// given, splits accuracy along the same line.
pub fn rare_word_report(
    human: &Corpus,
    rare: &BTreeSet<String>,
    outcomes: Option<&[GameOutcome]>,
    threshold: u64,
) -> Result<RareWordReport, AnalysisError> {
    let stats = ordered_map(human.records(), |game| game_rare_stats(game, rare));
    let correctness = outcomes
        .map(|o| correctness_by_game(human, o))
        .transpose()?;

    let n_games = stats.len();
    let mut with_rare = 0usize;
    let mut turns_with = 0.0;
    let mut turns_without = 0.0;
    let mut correct_with = (0usize, 0usize); // (correct, judged)
    let mut correct_without = (0usize, 0usize);
    let mut rare_types_seen: BTreeSet<&str> = BTreeSet::new();
    let mut rare_types_failed: BTreeSet<&str> = BTreeSet::new();
    let mut pos_totals: BTreeMap<&str, u64> = BTreeMap::new();

    for game in &stats {
        let has_rare = !game.rare_types.is_empty();
        rare_types_seen.extend(game.rare_types.iter().copied());
        for (tag, count) in &game.pos_counts {
            *pos_totals.entry(tag).or_default() += count;
        }
        if has_rare {
            with_rare += 1;
            turns_with += game.question_count as f64;
        } else {
            turns_without += game.question_count as f64;
        }
        if let Some(correctness) = &correctness {
            if let Some(Some(correct)) = correctness.get(game.game_id) {
                let bucket = if has_rare {
                    &mut correct_with
                } else {
                    &mut correct_without
                };
                bucket.1 += 1;
                if *correct {
                    bucket.0 += 1;
                }
                if !*correct {
                    rare_types_failed.extend(game.rare_types.iter().copied());
                }
            }
        }
    }

    let games_with_rare = if n_games == 0 {
        0.0
    } else {
        with_rare as f64 * 100.0 / n_games as f64
    };
    let accuracy_of = |(correct, judged): (usize, usize)| {
        (judged > 0).then(|| correct as f64 * 100.0 / judged as f64)
    };
    let rare_words_in_failed_games = (correctness.is_some() && !rare_types_seen.is_empty())
        .then(|| rare_types_failed.len() as f64 * 100.0 / rare_types_seen.len() as f64);
    let pos_distribution = {
        let total: u64 = pos_totals.values().sum();
        (total > 0).then(|| {
            pos_totals
                .iter()
                .map(|(tag, c)| (tag.to_string(), *c as f64 * 100.0 / total as f64))
                .collect()
        })
    };

    Ok(RareWordReport {
        threshold,
        rare_set_size: rare.len(),
        rare_fraction_of_vocab: None,
        games_with_rare,
        mean_turns_with_rare: mean(turns_with, with_rare),
        mean_turns_without_rare: mean(turns_without, n_games - with_rare),
        acc_with_rare: accuracy_of(correct_with),
        acc_without_rare: accuracy_of(correct_without),
        rare_words_in_failed_games,
        pos_distribution,
    })
}

/// Games grouped by question count: one row of the dialogue-difficulty
/// profile. Distractor statistics are means over the games that carry the
/// needed candidate/category fields and stay `None` when no game does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyBucket {
    /// Inclusive question-count range; `None` upper bound = unbounded.
    pub turn_range: (u32, Option<u32>),
    pub n_games: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_distractors: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_same_category_distractors: Option<f64>,
    /// Mean rare-word occurrences per game.
    pub mean_rare_words: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

/// One bucket per question count 1..=9 plus a 10-and-longer bucket.
pub fn default_bucket_edges() -> Vec<u32> {
    (1..=10).collect()
}

/// Buckets games by questioner-turn count at the given ascending lower-bound
/// `edges` (counts below the first edge land in the first bucket) and
/// reports per-bucket difficulty statistics. Empty buckets are omitted.
pub fn difficulty_buckets(
    human: &Corpus,
    rare: &BTreeSet<String>,
    outcomes: Option<&[GameOutcome]>,
    edges: &[u32],
) -> Result<Vec<DifficultyBucket>, AnalysisError> {
    assert!(
        !edges.is_empty() && edges.windows(2).all(|w| w[0] < w[1]),
        "edges must be non-empty and strictly increasing"
    );
    let correctness = outcomes
        .map(|o| correctness_by_game(human, o))
        .transpose()?;

    struct GameRow {
        bucket: usize,
        distractors: Option<usize>,
        same_category: Option<usize>,
        rare_occurrences: u64,
        correct: Option<bool>,
    }
    let rows = ordered_map(human.records(), |game| {
        let count = game.question_count() as u32;
        let bucket = edges.partition_point(|e| *e <= count).saturating_sub(1);
        let rare_occurrences = game
            .turns
            .iter()
            .flat_map(|t| t.tokens.iter())
            .filter(|t| rare.contains(*t))
            .count() as u64;
        GameRow {
            bucket,
            distractors: (!game.candidates.is_empty())
                .then(|| game.candidates.len().saturating_sub(1)),
            same_category: game.same_category_distractors(),
            rare_occurrences,
            correct: correctness
                .as_ref()
                .and_then(|c| c.get(game.game_id.as_str()).copied())
                .flatten(),
        }
    });

    let mut buckets = Vec::new();
    for (i, &lo) in edges.iter().enumerate() {
        let members: Vec<&GameRow> = rows.iter().filter(|r| r.bucket == i).collect();
        if members.is_empty() {
            continue;
        }
        let n_games = members.len();
        let mut distractor_sum = 0.0;
        let mut distractor_n = 0usize;
        let mut same_cat_sum = 0.0;
        let mut same_cat_n = 0usize;
        let mut rare_sum = 0.0;
        let mut correct = 0usize;
        let mut judged = 0usize;
        for row in &members {
            if let Some(d) = row.distractors {
                distractor_sum += d as f64;
                distractor_n += 1;
            }
            if let Some(s) = row.same_category {
                same_cat_sum += s as f64;
                same_cat_n += 1;
            }
            rare_sum += row.rare_occurrences as f64;
            if let Some(c) = row.correct {
                judged += 1;
                if c {
                    correct += 1;
                }
            }
        }
        buckets.push(DifficultyBucket {
            turn_range: (lo, edges.get(i + 1).map(|next| next - 1)),
            n_games,
            mean_distractors: mean(distractor_sum, distractor_n),
            mean_same_category_distractors: mean(same_cat_sum, same_cat_n),
            mean_rare_words: rare_sum / n_games as f64,
            accuracy: mean(correct as f64 * 100.0, judged),
        });
    }
    Ok(buckets)
}
