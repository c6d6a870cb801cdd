//! Human-anchored scaling of linguistic metrics and their aggregate,
//! Linguistic Divergence (LD).
//!
//! Each metric is mapped to a divergence in `[0, 1]` where 0 is human-level
//! performance. For "higher is better" metrics (H, GR, LRd) the divergence
//! is `1 - value/reference`; for "lower is better" metrics (MO, GRQ) it is
//! `(value - human) / (upper_bound - human)` with upper bounds 1 and 100.
//! LRd has no human anchor in practice (a human corpus compared to itself
//! is always 100), so its fallback reference is the ideal 100. LD is the
//! equally weighted mean of the available per-metric divergences and is 0
//! for human dialogues by construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textmetrics::MetricReport;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("metric {0}: no human value or fallback ideal to scale against")]
    MissingReference(&'static str),
    #[error("metric {0}: degenerate scaling bounds")]
    DegenerateBounds(&'static str),
    #[error("no metric is present in both reports")]
    NoCommonMetrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetricName {
    H,
    Mo,
    Grq,
    Gr,
    Lrd,
}

impl MetricName {
    pub const ALL: [MetricName; 5] = [
        MetricName::H,
        MetricName::Mo,
        MetricName::Grq,
        MetricName::Gr,
        MetricName::Lrd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MetricName::H => "H",
            MetricName::Mo => "MO",
            MetricName::Grq => "GRQ",
            MetricName::Gr => "GR",
            MetricName::Lrd => "LRd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

/// How one metric scales against its human anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub name: MetricName,
    pub direction: Direction,
    /// Worst attainable value; present for every LowerBetter metric.
    pub upper_bound: Option<f64>,
    /// Fallback reference when no human value exists (LRd only).
    pub ideal_when_no_human: Option<f64>,
}

impl MetricSpec {
    /// The canonical spec for each metric.
    pub fn canonical(name: MetricName) -> Self {
        match name {
            MetricName::H => MetricSpec {
                name,
                direction: Direction::HigherBetter,
                upper_bound: None,
                ideal_when_no_human: None,
            },
            MetricName::Mo => MetricSpec {
                name,
                direction: Direction::LowerBetter,
                upper_bound: Some(1.0),
                ideal_when_no_human: None,
            },
            MetricName::Grq => MetricSpec {
                name,
                direction: Direction::LowerBetter,
                upper_bound: Some(100.0),
                ideal_when_no_human: None,
            },
            MetricName::Gr => MetricSpec {
                name,
                direction: Direction::HigherBetter,
                upper_bound: None,
                ideal_when_no_human: None,
            },
            MetricName::Lrd => MetricSpec {
                name,
                direction: Direction::HigherBetter,
                upper_bound: None,
                ideal_when_no_human: Some(100.0),
            },
        }
    }
}

/// Scales one metric value to a divergence in `[0, 1]`; 0 matches the human
/// anchor, 1 is the worst case. Values beating the anchor clamp to 0.
pub fn scale_metric(
    value: f64,
    spec: &MetricSpec,
    human_value: Option<f64>,
) -> Result<f64, DivergenceError> {
    match spec.direction {
        Direction::HigherBetter => {
            let reference = human_value
                .or(spec.ideal_when_no_human)
                .ok_or(DivergenceError::MissingReference(spec.name.label()))?;
            if reference <= 0.0 {
                return Err(DivergenceError::DegenerateBounds(spec.name.label()));
            }
            Ok((1.0 - value / reference).clamp(0.0, 1.0))
        }
        Direction::LowerBetter => {
            let human = human_value
                .ok_or(DivergenceError::MissingReference(spec.name.label()))?;
            let upper = spec
                .upper_bound
                .ok_or(DivergenceError::DegenerateBounds(spec.name.label()))?;
            if upper <= human {
                return Err(DivergenceError::DegenerateBounds(spec.name.label()));
            }
            Ok(((value - human) / (upper - human)).clamp(0.0, 1.0))
        }
    }
}

/// A metric row where any value may be absent, e.g. a published table row
/// or a report computed without some reference inputs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub h: Option<f64>,
    pub mo: Option<f64>,
    pub grq: Option<f64>,
    pub gr: Option<f64>,
    pub lrd: Option<f64>,
}

impl MetricValues {
    pub fn get(&self, name: MetricName) -> Option<f64> {
        match name {
            MetricName::H => self.h,
            MetricName::Mo => self.mo,
            MetricName::Grq => self.grq,
            MetricName::Gr => self.gr,
            MetricName::Lrd => self.lrd,
        }
    }
}

impl From<&MetricReport> for MetricValues {
    fn from(report: &MetricReport) -> Self {
        MetricValues {
            h: Some(report.h),
            mo: Some(report.mo),
            grq: Some(report.grq),
            gr: report.gr,
            lrd: report.lrd,
        }
    }
}

/// Per-metric relative weights. The paper weights all metrics equally; the
/// field exists so replication studies can reweight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricWeights {
    pub h: f64,
    pub mo: f64,
    pub grq: f64,
    pub gr: f64,
    pub lrd: f64,
}

impl Default for MetricWeights {
    fn default() -> Self {
        MetricWeights {
            h: 1.0,
            mo: 1.0,
            grq: 1.0,
            gr: 1.0,
            lrd: 1.0,
        }
    }
}

impl MetricWeights {
    fn get(&self, name: MetricName) -> f64 {
        match name {
            MetricName::H => self.h,
            MetricName::Mo => self.mo,
            MetricName::Grq => self.grq,
            MetricName::Gr => self.gr,
            MetricName::Lrd => self.lrd,
        }
    }
}

/// Scaled per-metric divergences and their weighted mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdBreakdown {
    /// Metric label -> divergence in [0, 1]; absent metrics are omitted.
    pub per_metric: BTreeMap<String, f64>,
    pub ld: f64,
    pub n_metrics_used: usize,
}

/// Linguistic divergence of `report` from `human` with uniform weights.
///
/// Metrics are included when the model value is present and a reference
/// exists (the human value, or LRd's ideal-100 fallback); everything else
/// is excluded, mirroring "-" cells in published comparison tables.
pub fn linguistic_divergence(
    report: &MetricValues,
    human: &MetricValues,
) -> Result<LdBreakdown, DivergenceError> {
    linguistic_divergence_weighted(report, human, &MetricWeights::default())
}

/// [`linguistic_divergence`] with caller-supplied metric weights.
pub fn linguistic_divergence_weighted(
    report: &MetricValues,
    human: &MetricValues,
    weights: &MetricWeights,
) -> Result<LdBreakdown, DivergenceError> {
    let mut per_metric = BTreeMap::new();
    let mut weighted_sum = 0.0;
    let mut weight_total = 0.0;
    for name in MetricName::ALL {
        let Some(value) = report.get(name) else {
            continue;
        };
        let spec = MetricSpec::canonical(name);
        let human_value = human.get(name);
        if human_value.is_none() && spec.ideal_when_no_human.is_none() {
            continue;
        }
        let divergence = scale_metric(value, &spec, human_value)?;
        per_metric.insert(name.label().to_string(), divergence);
        let weight = weights.get(name);
        weighted_sum += weight * divergence;
        weight_total += weight;
    }
    if per_metric.is_empty() || weight_total <= 0.0 {
        return Err(DivergenceError::NoCommonMetrics);
    }
    Ok(LdBreakdown {
        ld: weighted_sum / weight_total,
        n_metrics_used: per_metric.len(),
        per_metric,
    })
}
