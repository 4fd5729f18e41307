use thiserror::Error;

use crate::schedule::ScheduleViolation;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("schedule violation: {0}")]
    Schedule(#[from] ScheduleViolation),

    #[error("center window {window} does not fit block of side {side}")]
    WindowTooLarge { window: usize, side: usize },

    #[error("degenerate block: {0}")]
    DegenerateBlock(String),

    #[error("selection budget {requested} exceeds {available} available cells")]
    BudgetOverflow { requested: usize, available: usize },

    #[error("image mismatch: {0}")]
    ImageMismatch(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
