//! Sentence-level BLEU-4 with clipped (modified) n-gram precisions, a
//! brevity penalty against the closest-length reference, and optional
//! epsilon smoothing of zero-count numerators.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::MetricError;

pub const MAX_ORDER: usize = 4;

/// How zero-count n-gram numerators are handled. Questions in guessing games
/// are often shorter than four tokens, so unsmoothed BLEU-4 collapses to
/// zero on most of them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    Off,
    /// Replace zero numerators by the given constant (numerator only).
    Epsilon(f64),
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::Epsilon(0.1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub smoothing: Smoothing,
}

impl BleuConfig {
    pub fn unsmoothed() -> Self {
        BleuConfig {
            smoothing: Smoothing::Off,
        }
    }
}

/// Clipped n-gram matches for one order: `(numerator, denominator)`, or
/// `None` when the candidate has no n-grams of that order.
pub(crate) fn modified_precision(
    candidate: &[String],
    references: &[&[String]],
    order: usize,
) -> Option<(u64, u64)> {
    if candidate.len() < order {
        return None;
    }
    let mut cand_counts: HashMap<&[String], u64> = HashMap::new();
    for window in candidate.windows(order) {
        *cand_counts.entry(window).or_default() += 1;
    }
    let mut max_ref: HashMap<&[String], u64> = HashMap::new();
    for reference in references {
        let mut ref_counts: HashMap<&[String], u64> = HashMap::new();
        for window in reference.windows(order) {
            if cand_counts.contains_key(window) {
                *ref_counts.entry(window).or_default() += 1;
            }
        }
        for (ngram, count) in ref_counts {
            let entry = max_ref.entry(ngram).or_default();
            *entry = (*entry).max(count);
        }
    }
    let numerator = cand_counts
        .iter()
        .map(|(ngram, count)| (*count).min(max_ref.get(ngram).copied().unwrap_or(0)))
        .sum();
    let denominator = (candidate.len() - order + 1) as u64;
    Some((numerator, denominator))
}

/// BLEU-4 of `candidate` against a reference set, in `[0, 1]`.
///
/// The score is the geometric mean of the modified precisions for orders
/// 1..=4 — orders where the candidate has no possible n-grams are skipped —
/// multiplied by the brevity penalty `exp(1 - r/c)` when the candidate is
/// shorter than the closest-length reference (ties resolved to the shorter
/// reference).
pub fn bleu4(
    candidate: &[String],
    references: &[&[String]],
    cfg: &BleuConfig,
) -> Result<f64, MetricError> {
    if candidate.is_empty() || references.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let c = candidate.len() as i64;
    let r = references
        .iter()
        .map(|r| r.len() as i64)
        .min_by_key(|&len| ((len - c).abs(), len))
        .expect("references checked non-empty");

    let mut log_sum = 0.0;
    let mut orders_used = 0u32;
    for order in 1..=MAX_ORDER {
        let Some((numerator, denominator)) = modified_precision(candidate, references, order)
        else {
            break;
        };
        let numerator = match (numerator, cfg.smoothing) {
            (0, Smoothing::Off) => return Ok(0.0),
            (0, Smoothing::Epsilon(eps)) => eps,
            (n, _) => n as f64,
        };
        log_sum += (numerator / denominator as f64).ln();
        orders_used += 1;
    }
    debug_assert!(orders_used > 0, "non-empty candidate always has unigrams");
    let geometric_mean = (log_sum / f64::from(orders_used)).exp();
    let brevity_penalty = if c < r {
        (1.0 - r as f64 / c as f64).exp()
    } else {
        1.0
    };
    Ok((geometric_mean * brevity_penalty).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn perfect_match_scores_one() {
        let cand = toks("is it the red dog");
        let refs = [cand.as_slice()];
        assert_eq!(bleu4(&cand, &refs, &BleuConfig::default()).unwrap(), 1.0);
        assert_eq!(bleu4(&cand, &refs, &BleuConfig::unsmoothed()).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_unigrams_score_zero_unsmoothed() {
        let cand = toks("alpha beta gamma delta");
        let reference = toks("one two three four");
        let refs = [reference.as_slice()];
        assert_eq!(bleu4(&cand, &refs, &BleuConfig::unsmoothed()).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_golden() {
        // candidate [the cat sat down] vs reference [the cat sat there]:
        // p1 = 3/4, p2 = 2/3, p3 = 1/2, p4 = 0/1, equal lengths so BP = 1.
        let cand = toks("the cat sat down");
        let reference = toks("the cat sat there");
        let refs = [reference.as_slice()];
        assert_eq!(bleu4(&cand, &refs, &BleuConfig::unsmoothed()).unwrap(), 0.0);
        // with the 0.1 epsilon numerator: (3/4 * 2/3 * 1/2 * 0.1)^(1/4)
        let smoothed = bleu4(&cand, &refs, &BleuConfig::default()).unwrap();
        assert_abs_diff_eq!(smoothed, 0.3976353643835253, epsilon = 1e-12);
    }

    #[test]
    fn short_candidates_skip_impossible_orders() {
        // single shared token: p1 = 1 and orders 2..4 are skipped, so the
        // geometric mean is 1; BP = exp(1 - 4/1) applies.
        let cand = toks("cat");
        let reference = toks("the cat sat there");
        let refs = [reference.as_slice()];
        let score = bleu4(&cand, &refs, &BleuConfig::unsmoothed()).unwrap();
        assert_abs_diff_eq!(score, (1.0f64 - 4.0).exp(), epsilon = 1e-12);
    }

    #[test]
    fn brevity_penalty_uses_closest_reference() {
        let cand = toks("a b c d");
        let short = toks("a b");
        let long = toks("a b c d e f g h");
        // closest-length reference has length 2 -> no penalty (c >= r)
        let refs = [short.as_slice(), long.as_slice()];
        let score = bleu4(&cand, &refs, &BleuConfig::default()).unwrap();
        let refs_long_only = [long.as_slice()];
        let penalized = bleu4(&cand, &refs_long_only, &BleuConfig::default()).unwrap();
        assert!(penalized < score);
    }

    #[test]
    fn empty_inputs_error() {
        let cand = toks("a");
        let empty: [&[String]; 0] = [];
        assert!(matches!(
            bleu4(&cand, &empty, &BleuConfig::default()),
            Err(MetricError::EmptyInput)
        ));
        let nothing: Vec<String> = Vec::new();
        let refs = [cand.as_slice()];
        assert!(matches!(
            bleu4(&nothing, &refs, &BleuConfig::default()),
            Err(MetricError::EmptyInput)
        ));
    }

    proptest! {
        #[test]
        fn score_is_in_unit_interval(
            cand in proptest::collection::vec(0u8..6, 1..10),
            reference in proptest::collection::vec(0u8..6, 1..10),
        ) {
            let cand: Vec<String> = cand.iter().map(|i| format!("w{i}")).collect();
            let reference: Vec<String> = reference.iter().map(|i| format!("w{i}")).collect();
            let refs = [reference.as_slice()];
            for cfg in [BleuConfig::default(), BleuConfig::unsmoothed()] {
                let score = bleu4(&cand, &refs, &cfg).unwrap();
                prop_assert!((0.0..=1.0).contains(&score));
            }
        }

        #[test]
        fn self_bleu_is_one_for_long_enough_candidates(
            cand in proptest::collection::vec(0u8..6, 4..12),
        ) {
            let cand: Vec<String> = cand.iter().map(|i| format!("w{i}")).collect();
            let refs = [cand.as_slice()];
            prop_assert_eq!(bleu4(&cand, &refs, &BleuConfig::unsmoothed()).unwrap(), 1.0);
        }

        #[test]
        fn adding_a_reference_never_decreases_numerators(
            cand in proptest::collection::vec(0u8..5, 1..8),
            ref_a in proptest::collection::vec(0u8..5, 1..8),
            ref_b in proptest::collection::vec(0u8..5, 1..8),
        ) {
            let cand: Vec<String> = cand.iter().map(|i| format!("w{i}")).collect();
            let ref_a: Vec<String> = ref_a.iter().map(|i| format!("w{i}")).collect();
            let ref_b: Vec<String> = ref_b.iter().map(|i| format!("w{i}")).collect();
            for order in 1..=MAX_ORDER {
                let one = modified_precision(&cand, &[ref_a.as_slice()], order);
                let two = modified_precision(&cand, &[ref_a.as_slice(), ref_b.as_slice()], order);
                match (one, two) {
                    (Some((n1, d1)), Some((n2, d2))) => {
                        prop_assert!(n2 >= n1);
                        prop_assert_eq!(d1, d2);
                    }
                    (None, None) => {}
                    _ => prop_assert!(false, "order availability must not depend on references"),
                }
            }
        }
    }
}
