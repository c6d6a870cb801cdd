//! Frequency vocabularies with deterministic ranks.

use std::collections::{BTreeSet, HashMap};

use super::{Corpus, CorpusError, SpeakerScope, StopwordSet};

/// Token counts over a training corpus plus 1-based frequency ranks
/// (1 = most frequent; ties broken lexicographically, so ranks are
/// reproducible across runs).
///
/// Never empty: construction fails with [`CorpusError::EmptyScope`] when the
/// selected speakers contribute no countable tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    counts: HashMap<String, u64>,
    ranks: HashMap<String, u32>,
    total_tokens: u64,
    scope: SpeakerScope,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn scope(&self) -> SpeakerScope {
        self.scope
    }

    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.counts.contains_key(token)
    }

    pub fn rank(&self, token: &str) -> Option<u32> {
        self.ranks.get(token).copied()
    }

    /// Tokens in unspecified order; use [`Vocabulary::by_rank`] when the
    /// iteration order matters.
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    /// `(token, count, rank)` sorted by rank.
    pub fn by_rank(&self) -> Vec<(&str, u64, u32)> {
        let mut items: Vec<(&str, u64, u32)> = self
            .counts
            .iter()
            .map(|(t, c)| (t.as_str(), *c, self.ranks[t]))
            .collect();
        items.sort_unstable_by_key(|(_, _, r)| *r);
        items
    }
}

/// Counts every token of the selected speakers, drops tokens occurring fewer
/// than `min_count` times, and assigns frequency ranks.
pub fn build_vocabulary(
    corpus: &Corpus,
    scope: SpeakerScope,
    min_count: u64,
) -> Result<Vocabulary, CorpusError> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for token in corpus.scoped_tokens(scope) {
        *counts.entry(token.to_string()).or_default() += 1;
    }
    counts.retain(|_, c| *c >= min_count);
    if counts.is_empty() {
        return Err(CorpusError::EmptyScope);
    }
    let mut ordered: Vec<(&String, &u64)> = counts.iter().collect();
    ordered.sort_unstable_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    let ranks: HashMap<String, u32> = ordered
        .iter()
        .enumerate()
        .map(|(i, (t, _))| ((*t).clone(), (i + 1) as u32))
        .collect();
    let total_tokens = counts.values().sum();
    Ok(Vocabulary {
        counts,
        ranks,
        total_tokens,
        scope,
    })
}

/// Unique tokens that are outside the stopword list and contain at least one
/// alphabetic character (pure digit strings are excluded).
pub fn content_words<'a, I>(tokens: I, stopwords: &StopwordSet) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a str>,
{
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t) && t.chars().any(char::is_alphabetic))
        .map(str::to_string)
        .collect()
}
