//! The `dialometer` subcommands.

pub mod correlate;
pub mod curves;
pub mod eval;
pub mod rare;
pub mod table;
pub mod zipf;

use std::path::Path;

use dialometer_core::corpus::{
    build_vocabulary, load_corpus, Corpus, StatusFilter, StopwordSet, Vocabulary,
};
use dialometer_core::tasksuccess::{load_outcomes, OutcomesFile};
use dialometer_core::textmetrics::{BleuConfig, EvalConfig};

use crate::config::RunConfig;
use crate::failure::{input, precondition, Failure};

pub(crate) fn load_stopwords(config: &RunConfig) -> Result<StopwordSet, Failure> {
    match &config.stopword_path {
        Some(path) => StopwordSet::load(Path::new(path)).map_err(input),
        None => Ok(StopwordSet::empty()),
    }
}

pub(crate) fn load_corpus_with(
    path: &Path,
    config: &RunConfig,
    filter: StatusFilter,
) -> Result<Corpus, Failure> {
    load_corpus(path, config.tokenizer, filter).map_err(input)
}

pub(crate) fn build_train_vocab(
    path: &Path,
    config: &RunConfig,
) -> Result<Vocabulary, Failure> {
    let train = load_corpus_with(path, config, config.status_filter.generated_filter())?;
    build_vocabulary(&train, config.speaker_scope, 1).map_err(precondition)
}

pub(crate) fn eval_config(config: &RunConfig) -> EvalConfig {
    EvalConfig {
        scope: config.speaker_scope,
        bleu: BleuConfig {
            smoothing: config.bleu_smoothing,
        },
    }
}

pub(crate) fn load_game_outcomes(
    path: &Path,
) -> Result<Vec<dialometer_core::tasksuccess::GameOutcome>, Failure> {
    match load_outcomes(path).map_err(input)? {
        OutcomesFile::Games(games) => Ok(games),
        OutcomesFile::Turns(_) => Err(crate::failure::input_msg(format!(
            "{}: expected per-game outcomes, found a per-turn stream",
            path.display()
        ))),
    }
}
