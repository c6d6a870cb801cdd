//! Corpus analytics for referential guessing games (GuessWhat-style object
//! guessing, GuessWhich-style image ranking, MutualFriends-style entity
//! matching).
//!
//! The crate evaluates *recorded* dialogue transcripts; it never runs or
//! trains the agents that produced them. Functionality is split into:
//!
//! - [`corpus`]: JSON-Lines loading, tokenization, vocabularies, stopwords,
//!   deterministic subsampling.
//! - [`textmetrics`]: surface-level linguistic metrics — unigram entropy (H),
//!   mutual overlap (MO, within-dialogue BLEU-4), games with repeated
//!   questions (GRQ), global recall (GR), local recall-d (LRd), Zipf curves,
//!   vocabulary overlap.
//! - [`divergence`]: human-anchored scaling of each metric and the aggregate
//!   Linguistic Divergence (LD) score.
//! - [`tasksuccess`]: accuracy, mean percentile rank, chance levels, and
//!   by-turn success curves over ingested game outcomes.
//! - [`analysis`]: Spearman rank correlation, rare-word stratification,
//!   difficulty buckets, and epoch/downsizing metric tracks.
//! - [`synth`]: seeded synthetic corpora for benchmarks and stress tests.
//!
//! With the `parallel` feature (enabled by default) per-dialogue work is
//! fanned out via rayon. Results are reduced in a fixed order, so output is
//! byte-identical at any thread count; disabling the feature falls back to
//! plain sequential iterators.

pub mod analysis;
pub mod corpus;
pub mod divergence;
mod par;
pub mod synth;
pub mod tasksuccess;
pub mod textmetrics;
