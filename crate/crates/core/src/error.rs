use thiserror::Error;

use crate::groebner::GbStats;

pub type Result<T, E = ArrError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ArrError {
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// The characteristic divides an integer the computation must invert or
    /// keep nonzero (an exponent brought down by differentiation, a degree in
    /// Euler's formula, a denominator).
    #[error("characteristic collision: {0}")]
    CharacteristicCollision(String),

    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),

    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("budget exhausted: {reason} ({stats})")]
    BudgetExhausted { reason: String, stats: GbStats },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ideal is not saturated: {0}")]
    NotSaturated(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A structural postcondition failed; for inputs satisfying the stated
    /// hypotheses this means a bug, never a legitimate outcome.
    #[error("structural assertion failed: {0}")]
    Structural(String),

    #[error("uncovered component: {0}")]
    UncoveredComponent(String),

    #[error("no general choice found: {0}")]
    Genericity(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ArrError {
    pub fn parse(msg: impl Into<String>) -> Self {
        ArrError::Parse {
            line: 1,
            col: 1,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, ArrError::BudgetExhausted { .. })
    }
}

impl From<String> for ArrError {
    fn from(s: String) -> Self {
        ArrError::Scenario(s)
    }
}
