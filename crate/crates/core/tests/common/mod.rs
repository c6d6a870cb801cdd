//! Naive reference implementations used as oracles by the integration
//! suites. Everything here recomputes metrics from first principles with
//! linear scans and explicit loops, independent of the library's code paths,
//! so agreement is meaningful.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use dialometer_core::corpus::{
    Corpus, GameRecord, Speaker, SpeakerScope, StopwordSet,
};
use dialometer_core::tasksuccess::{GameOutcome, TurnPrediction};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn admits(scope: SpeakerScope, speaker: Speaker) -> bool {
    match scope {
        SpeakerScope::QuestionerOnly => speaker == Speaker::Questioner,
        SpeakerScope::Both => true,
    }
}

fn scope_tokens(corpus: &Corpus, scope: SpeakerScope) -> Vec<String> {
    let mut tokens = Vec::new();
    for record in corpus.records() {
        for turn in &record.turns {
            if admits(scope, turn.speaker) {
                tokens.extend(turn.tokens.iter().cloned());
            }
        }
    }
    tokens
}

fn sorted_types(tokens: &[String]) -> Vec<String> {
    let mut types = tokens.to_vec();
    types.sort();
    types.dedup();
    types
}

pub fn naive_entropy(corpus: &Corpus, scope: SpeakerScope) -> f64 {
    let tokens = scope_tokens(corpus, scope);
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for token in &tokens {
        *counts.entry(token).or_default() += 1;
    }
    let total = tokens.len() as f64;
    let mut h = 0.0;
    for count in counts.values() {
        let p = *count as f64 / total;
        h -= p * p.log2();
    }
    h
}

fn slices_equal(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

/// BLEU-4 recomputed with distinct-n-gram linear scans; `eps` of `None`
/// means smoothing off.
pub fn naive_bleu4(candidate: &[String], references: &[&[String]], eps: Option<f64>) -> f64 {
    assert!(!candidate.is_empty() && !references.is_empty());
    let c = candidate.len();
    let mut r = usize::MAX;
    let mut best_diff = i64::MAX;
    for reference in references {
        let diff = (reference.len() as i64 - c as i64).abs();
        if diff < best_diff || (diff == best_diff && reference.len() < r) {
            best_diff = diff;
            r = reference.len();
        }
    }
    let mut logs = Vec::new();
    for order in 1..=4usize {
        if c < order {
            break;
        }
        let windows: Vec<&[String]> = candidate.windows(order).collect();
        let mut distinct: Vec<&[String]> = Vec::new();
        for window in &windows {
            if !distinct.iter().any(|d| slices_equal(d, window)) {
                distinct.push(window);
            }
        }
        let mut clipped = 0u64;
        for ngram in &distinct {
            let in_candidate =
                windows.iter().filter(|w| slices_equal(w, ngram)).count() as u64;
            let mut max_in_refs = 0u64;
            for reference in references {
                let count = reference
                    .windows(order)
                    .filter(|w| slices_equal(w, ngram))
                    .count() as u64;
                max_in_refs = max_in_refs.max(count);
            }
            clipped += in_candidate.min(max_in_refs);
        }
        let numerator = if clipped == 0 {
            match eps {
                None => return 0.0,
                Some(e) => e,
            }
        } else {
            clipped as f64
        };
        logs.push((numerator / (c - order + 1) as f64).ln());
    }
    let geometric_mean = (logs.iter().sum::<f64>() / logs.len() as f64).exp();
    let brevity = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    (geometric_mean * brevity).clamp(0.0, 1.0)
}

fn question_tokens(game: &GameRecord) -> Vec<&[String]> {
    game.turns
        .iter()
        .filter(|t| t.speaker == Speaker::Questioner)
        .map(|t| t.tokens.as_slice())
        .collect()
}

pub fn naive_mutual_overlap(game: &GameRecord, eps: Option<f64>) -> f64 {
    let questions: Vec<&[String]> = question_tokens(game)
        .into_iter()
        .filter(|q| !q.is_empty())
        .collect();
    if questions.len() <= 1 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..questions.len() {
        let mut references = Vec::new();
        for (j, question) in questions.iter().enumerate() {
            if j != i {
                references.push(*question);
            }
        }
        sum += naive_bleu4(questions[i], &references, eps);
    }
    sum / questions.len() as f64
}

pub fn naive_corpus_mo(corpus: &Corpus, eps: Option<f64>) -> f64 {
    let mut sum = 0.0;
    for record in corpus.records() {
        sum += naive_mutual_overlap(record, eps);
    }
    sum / corpus.len() as f64
}

pub fn naive_grq(corpus: &Corpus) -> f64 {
    let mut repeated_games = 0usize;
    for record in corpus.records() {
        let questions = question_tokens(record);
        let mut repeated = false;
        for i in 0..questions.len() {
            for j in (i + 1)..questions.len() {
                if slices_equal(questions[i], questions[j]) {
                    repeated = true;
                }
            }
        }
        if repeated {
            repeated_games += 1;
        }
    }
    repeated_games as f64 * 100.0 / corpus.len() as f64
}

/// A vocabulary recomputed from scratch: `(token, count)` sorted by count
/// descending then token ascending, so rank = index + 1.
pub struct NaiveVocab {
    pub items: Vec<(String, u64)>,
    pub scope: SpeakerScope,
}

pub fn naive_vocab(corpus: &Corpus, scope: SpeakerScope, min_count: u64) -> NaiveVocab {
    let tokens = scope_tokens(corpus, scope);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for token in tokens {
        *counts.entry(token).or_default() += 1;
    }
    let mut items: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(_, c)| *c >= min_count)
        .collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    NaiveVocab { items, scope }
}

pub fn naive_global_recall(generated: &Corpus, vocab: &NaiveVocab) -> f64 {
    let used = sorted_types(&scope_tokens(generated, vocab.scope));
    let mut recalled = 0usize;
    for (token, _) in &vocab.items {
        if used.iter().any(|u| u == token) {
            recalled += 1;
        }
    }
    recalled as f64 * 100.0 / vocab.items.len() as f64
}

pub fn naive_unused_mean_rank(generated: &Corpus, vocab: &NaiveVocab) -> Option<f64> {
    let used = sorted_types(&scope_tokens(generated, vocab.scope));
    let mut rank_sum = 0u64;
    let mut unused = 0u64;
    for (index, (token, _)) in vocab.items.iter().enumerate() {
        if !used.iter().any(|u| u == token) {
            rank_sum += index as u64 + 1;
            unused += 1;
        }
    }
    (unused > 0).then(|| rank_sum as f64 / unused as f64)
}

fn naive_content_words(game: &GameRecord, stopwords: &StopwordSet) -> Vec<String> {
    let mut words = Vec::new();
    for question in question_tokens(game) {
        for token in question {
            if !stopwords.contains(token)
                && token.chars().any(char::is_alphabetic)
                && !words.iter().any(|w| w == token)
            {
                words.push(token.clone());
            }
        }
    }
    words
}

/// Returns `(mean, n_aligned, n_skipped)`.
pub fn naive_corpus_lrd(
    generated: &Corpus,
    human: &Corpus,
    stopwords: &StopwordSet,
) -> (f64, usize, usize) {
    let mut sum = 0.0;
    let mut aligned = 0usize;
    let mut used = 0usize;
    for human_game in human.records() {
        let Some(gen_game) = generated
            .records()
            .iter()
            .find(|g| g.game_id == human_game.game_id)
        else {
            continue;
        };
        aligned += 1;
        let human_words = naive_content_words(human_game, stopwords);
        if human_words.is_empty() {
            continue;
        }
        let gen_words = naive_content_words(gen_game, stopwords);
        let shared = human_words
            .iter()
            .filter(|w| gen_words.iter().any(|g| &g == w))
            .count();
        sum += shared as f64 * 100.0 / human_words.len() as f64;
        used += 1;
    }
    (sum / used as f64, aligned, aligned - used)
}

pub fn naive_zipf(corpus: &Corpus, scope: SpeakerScope) -> Vec<(u32, u64)> {
    let vocab = naive_vocab(corpus, scope, 1);
    vocab
        .items
        .iter()
        .enumerate()
        .map(|(i, (_, c))| ((i + 1) as u32, *c))
        .collect()
}

pub fn naive_vocab_overlap(a: &Corpus, b: &Corpus, scope: SpeakerScope) -> f64 {
    let types_a = sorted_types(&scope_tokens(a, scope));
    let types_b = sorted_types(&scope_tokens(b, scope));
    let shared = types_a
        .iter()
        .filter(|t| types_b.iter().any(|u| &u == t))
        .count();
    let union = types_a.len() + types_b.len() - shared;
    shared as f64 * 100.0 / union as f64
}

pub fn naive_accuracy(outcomes: &[GameOutcome]) -> f64 {
    let mut correct = 0usize;
    for outcome in outcomes {
        if outcome.correct.expect("accuracy oracle needs correct") {
            correct += 1;
        }
    }
    correct as f64 * 100.0 / outcomes.len() as f64
}

pub fn naive_mpr(outcomes: &[GameOutcome]) -> f64 {
    let mut sum = 0.0;
    for outcome in outcomes {
        let rank = outcome.rank.expect("mpr oracle needs rank") as f64;
        let n = f64::from(outcome.n_candidates);
        sum += 100.0 * ((n - rank) / n);
    }
    sum / outcomes.len() as f64
}

/// Per-turn recount: `(turn, value, n)` per observed turn index, ascending.
pub fn naive_per_turn(
    predictions: &[TurnPrediction],
    use_rank: bool,
) -> Vec<(u32, f64, usize)> {
    let mut turn_indices: Vec<u32> = predictions.iter().map(|p| p.turn_index).collect();
    turn_indices.sort_unstable();
    turn_indices.dedup();
    let mut curve = Vec::new();
    for turn in turn_indices {
        let slice: Vec<&TurnPrediction> =
            predictions.iter().filter(|p| p.turn_index == turn).collect();
        let mut sum = 0.0;
        for prediction in &slice {
            if use_rank {
                let rank = prediction.rank.expect("oracle needs rank") as f64;
                let n = f64::from(prediction.n_candidates);
                sum += 100.0 * ((n - rank) / n);
            } else if prediction.correct.expect("oracle needs correct") {
                sum += 100.0;
            }
        }
        curve.push((turn, sum / slice.len() as f64, slice.len()));
    }
    curve
}

/// Direct single-pass recount of the rare-word report fields.
pub struct NaiveRareReport {
    pub games_with_rare: f64,
    pub mean_turns_with_rare: Option<f64>,
    pub mean_turns_without_rare: Option<f64>,
    pub acc_with_rare: Option<f64>,
    pub acc_without_rare: Option<f64>,
    pub rare_words_in_failed_games: Option<f64>,
    pub pos_distribution: Option<BTreeMap<String, f64>>,
}

pub fn naive_rare_report(
    human: &Corpus,
    rare: &[String],
    outcomes: Option<&[GameOutcome]>,
) -> NaiveRareReport {
    let is_rare = |token: &str| rare.iter().any(|r| r == token);
    let n = human.len();
    let mut with_rare = Vec::new();
    let mut without_rare = Vec::new();
    let mut types_seen: Vec<&str> = Vec::new();
    let mut types_failed: Vec<&str> = Vec::new();
    let mut pos_counts: BTreeMap<String, u64> = BTreeMap::new();

    for game in human.records() {
        let mut game_rare: Vec<&str> = Vec::new();
        for turn in &game.turns {
            for (i, token) in turn.tokens.iter().enumerate() {
                if is_rare(token) {
                    if !game_rare.iter().any(|t| t == token) {
                        game_rare.push(token);
                    }
                    if let Some(pos) = &turn.pos_tags {
                        *pos_counts.entry(pos[i].clone()).or_default() += 1;
                    }
                }
            }
        }
        for t in &game_rare {
            if !types_seen.iter().any(|s| s == t) {
                types_seen.push(t);
            }
        }
        let correct = outcomes.and_then(|outcomes| {
            outcomes
                .iter()
                .find(|o| o.game_id == game.game_id)
                .and_then(|o| o.correct)
        });
        if correct == Some(false) {
            for t in &game_rare {
                if !types_failed.iter().any(|s| s == t) {
                    types_failed.push(t);
                }
            }
        }
        let questions = question_tokens(game).len();
        if game_rare.is_empty() {
            without_rare.push((questions, correct));
        } else {
            with_rare.push((questions, correct));
        }
    }

    let mean_q = |items: &[(usize, Option<bool>)]| {
        (!items.is_empty())
            .then(|| items.iter().map(|(q, _)| *q as f64).sum::<f64>() / items.len() as f64)
    };
    let acc = |items: &[(usize, Option<bool>)]| {
        let judged: Vec<bool> = items.iter().filter_map(|(_, c)| *c).collect();
        (!judged.is_empty())
            .then(|| judged.iter().filter(|c| **c).count() as f64 * 100.0 / judged.len() as f64)
    };
    let pos_total: u64 = pos_counts.values().sum();
    NaiveRareReport {
        games_with_rare: with_rare.len() as f64 * 100.0 / n as f64,
        mean_turns_with_rare: mean_q(&with_rare),
        mean_turns_without_rare: mean_q(&without_rare),
        acc_with_rare: acc(&with_rare),
        acc_without_rare: acc(&without_rare),
        rare_words_in_failed_games: (outcomes.is_some() && !types_seen.is_empty())
            .then(|| types_failed.len() as f64 * 100.0 / types_seen.len() as f64),
        pos_distribution: (pos_total > 0).then(|| {
            pos_counts
                .iter()
                .map(|(tag, c)| (tag.clone(), *c as f64 * 100.0 / pos_total as f64))
                .collect()
        }),
    }
}

pub struct NaiveBucket {
    pub lo: u32,
    pub hi: Option<u32>,
    pub n_games: usize,
    pub mean_distractors: Option<f64>,
    pub mean_same_category: Option<f64>,
    pub mean_rare_words: f64,
    pub accuracy: Option<f64>,
}

pub fn naive_buckets(
    human: &Corpus,
    rare: &[String],
    outcomes: Option<&[GameOutcome]>,
    edges: &[u32],
) -> Vec<NaiveBucket> {
    let is_rare = |token: &str| rare.iter().any(|r| r == token);
    let mut buckets = Vec::new();
    for (i, &lo) in edges.iter().enumerate() {
        let hi = edges.get(i + 1).map(|e| e - 1);
        let mut members = Vec::new();
        for game in human.records() {
            let count = question_tokens(game).len() as u32;
            let in_bucket = if i == 0 {
                match hi {
                    Some(hi) => count <= hi,
                    None => true,
                }
            } else {
                count >= lo && hi.is_none_or(|hi| count <= hi)
            };
            if in_bucket {
                members.push(game);
            }
        }
        if members.is_empty() {
            continue;
        }
        let mut distractors = Vec::new();
        let mut same_category = Vec::new();
        let mut rare_counts = Vec::new();
        let mut judged = Vec::new();
        for game in &members {
            if !game.candidates.is_empty() {
                distractors.push(game.candidates.len() as f64 - 1.0);
            }
            if let (Some(target), false) = (&game.target_id, game.candidates.is_empty()) {
                if let Some(target_cand) = game.candidates.iter().find(|c| &c.id == target) {
                    if let Some(category) = &target_cand.category {
                        let sharing = game
                            .candidates
                            .iter()
                            .filter(|c| c.category.as_ref() == Some(category))
                            .count();
                        same_category.push(sharing as f64 - 1.0);
                    }
                }
            }
            let occurrences: usize = game
                .turns
                .iter()
                .map(|t| t.tokens.iter().filter(|tok| is_rare(tok)).count())
                .sum();
            rare_counts.push(occurrences as f64);
            if let Some(outcomes) = outcomes {
                if let Some(outcome) = outcomes.iter().find(|o| o.game_id == game.game_id) {
                    if let Some(correct) = outcome.correct {
                        judged.push(correct);
                    }
                }
            }
        }
        let mean_of = |v: &[f64]| {
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        buckets.push(NaiveBucket {
            lo,
            hi,
            n_games: members.len(),
            mean_distractors: mean_of(&distractors),
            mean_same_category: mean_of(&same_category),
            mean_rare_words: rare_counts.iter().sum::<f64>() / rare_counts.len() as f64,
            accuracy: (!judged.is_empty()).then(|| {
                judged.iter().filter(|c| **c).count() as f64 * 100.0 / judged.len() as f64
            }),
        });
    }
    buckets
}
