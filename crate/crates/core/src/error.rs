use thiserror::Error;

use crate::quadrature::QuadratureResult;

/// Errors produced by the library.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// parse failures, validation failures (bad arguments, broken invariants,
/// violated hypotheses) and numeric failures (budgets, resolutions, data).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("point outside sampled range: {0}")]
    Range(String),

    #[error("panel budget exceeded: {needed} panels needed, {budget} allowed (best estimate {})", .partial.value)]
    PanelBudgetExceeded {
        needed: u64,
        budget: u64,
        partial: Box<QuadratureResult>,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("resolution too coarse: {0}")]
    Resolution(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for errors caused by numerics rather than by the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::PanelBudgetExceeded { .. } | Error::InsufficientData(_) | Error::Resolution(_) | Error::Range(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
