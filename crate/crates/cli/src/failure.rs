//! Exit-code discipline: 0 success, 2 input/schema errors, 3 metric
//! precondition violations, 4 internal invariant breaches.

use dialometer_core::analysis::AnalysisError;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

/// Unreadable, unparsable, or schema-violating input.
pub fn input<E>(error: E) -> Failure
where
    E: Into<anyhow::Error>,
{
    Failure {
        code: 2,
        error: error.into(),
    }
}

pub fn input_msg(message: String) -> Failure {
    input(anyhow::anyhow!(message))
}

/// Well-formed input that violates a metric precondition (empty scope, no
/// aligned games, too few points, ...).
pub fn precondition<E>(error: E) -> Failure
where
    E: Into<anyhow::Error>,
{
    Failure {
        code: 3,
        error: error.into(),
    }
}

/// A bug: an internal invariant did not hold.
pub fn internal(message: String) -> Failure {
    Failure {
        code: 4,
        error: anyhow::anyhow!(message),
    }
}

/// Track errors carry their own split: step loading and manifest problems
/// are input errors, everything else is a precondition violation.
pub fn from_analysis(error: AnalysisError) -> Failure {
    match &error {
        AnalysisError::ManifestParse { .. }
        | AnalysisError::Io { .. }
        | AnalysisError::StepLoad { .. }
        | AnalysisError::StepOutcomes { .. } => input(error),
        _ => precondition(error),
    }
}
