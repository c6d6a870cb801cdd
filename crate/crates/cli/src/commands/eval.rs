//! `dialometer eval`: one corpus in, one metric report out.

use std::path::{Path, PathBuf};

use clap::Args;
use dialometer_core::divergence::{linguistic_divergence, DivergenceError, MetricValues};
use dialometer_core::tasksuccess::{
    accuracy, load_outcomes, mean_percentile_rank, per_turn_curve, CurveMode, OutcomesFile,
};
use dialometer_core::textmetrics::evaluate_corpus;

use crate::config::{self, CommonOpts, OutputFormat};
use crate::failure::{input, internal, precondition, Failure};
use crate::report::{
    checksum_input, emit, to_flat_csv, to_json_bytes, LooseMetrics, ReportDoc, TsSection,
};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Generated (or otherwise evaluated) corpus, JSON-Lines
    #[arg(long)]
    pub gen: PathBuf,
    /// Human corpus aligned by game_id; enables LRd and the LD score
    #[arg(long)]
    pub human: Option<PathBuf>,
    /// Training corpus; its vocabulary enables GR and unused-word ranks
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Per-game or per-turn outcomes, JSON-Lines
    #[arg(long)]
    pub outcomes: Option<PathBuf>,
    /// Task tag stored in the report (comparison tables require matching tags)
    #[arg(long)]
    pub task: Option<String>,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: &EvalArgs) -> Result<(), Failure> {
    let config = config::resolve(&args.common)?;
    config::with_jobs(args.common.jobs, || {
        let mut inputs = vec![checksum_input("gen", &args.gen)?];
        for (role, path) in [("human", &args.human), ("train", &args.train), ("outcomes", &args.outcomes)] {
            if let Some(path) = path {
                inputs.push(checksum_input(role, path)?);
            }
        }
        if let Some(path) = &config.stopword_path {
            inputs.push(checksum_input("stopwords", Path::new(path))?);
        }

        let stopwords = super::load_stopwords(&config)?;
        let generated =
            super::load_corpus_with(&args.gen, &config, config.status_filter.generated_filter())?;
        let human = args
            .human
            .as_ref()
            .map(|path| super::load_corpus_with(path, &config, config.status_filter.human_filter()))
            .transpose()?;
        let vocab = args
            .train
            .as_ref()
            .map(|path| super::build_train_vocab(path, &config))
            .transpose()?;

        let eval_cfg = super::eval_config(&config);
        let corpus_report = evaluate_corpus(
            &generated,
            human.as_ref(),
            vocab.as_ref(),
            &stopwords,
            &eval_cfg,
        )
        .map_err(precondition)?;
        corpus_report
            .validate()
            .map_err(|violation| internal(format!("metric report invariant: {violation}")))?;

        let mut doc = ReportDoc::new(&config, inputs, LooseMetrics::from(&corpus_report));
        doc.task = args.task.clone();

        if let Some(human) = &human {
            let human_report =
                evaluate_corpus(human, None, vocab.as_ref(), &stopwords, &eval_cfg)
                    .map_err(precondition)?;
            human_report
                .validate()
                .map_err(|violation| internal(format!("metric report invariant: {violation}")))?;
            let breakdown = linguistic_divergence(
                &MetricValues::from(&corpus_report),
                &MetricValues::from(&human_report),
            );
            doc.ld = match breakdown {
                Ok(breakdown) => Some(breakdown),
                Err(DivergenceError::NoCommonMetrics) => None,
                Err(error) => return Err(precondition(error)),
            };
            doc.human = Some(LooseMetrics::from(&human_report));
        }

        if let Some(path) = &args.outcomes {
            let mut ts = TsSection::default();
            match load_outcomes(path).map_err(input)? {
                OutcomesFile::Games(games) => {
                    if games.iter().all(|g| g.correct.is_some()) {
                        ts.acc = Some(accuracy(&games).map_err(precondition)?);
                    }
                    if games.iter().all(|g| g.rank.is_some()) {
                        ts.mpr = Some(mean_percentile_rank(&games).map_err(precondition)?);
                    }
                }
                OutcomesFile::Turns(turns) => {
                    if turns.iter().all(|t| t.correct.is_some()) {
                        ts.per_turn_acc =
                            Some(per_turn_curve(&turns, CurveMode::Accuracy).map_err(precondition)?);
                    }
                    if turns.iter().all(|t| t.rank.is_some()) {
                        ts.per_turn_mpr =
                            Some(per_turn_curve(&turns, CurveMode::Mpr).map_err(precondition)?);
                    }
                }
            }
            if ts.is_empty() {
                return Err(precondition(anyhow::anyhow!(
                    "outcomes {} carry neither complete correct nor complete rank fields",
                    path.display()
                )));
            }
            doc.ts = Some(ts);
        }

        let bytes = match config.output_format {
            OutputFormat::Json => to_json_bytes(&doc)?,
            OutputFormat::Csv => to_flat_csv(&doc)?,
        };
        emit(&bytes, args.common.out.as_deref())
    })
}
