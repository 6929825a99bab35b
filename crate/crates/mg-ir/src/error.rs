use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IrError {
    #[error("state already carries a correction term")]
    CorrectionPresent,
    #[error("state has no correction term")]
    CorrectionMissing,
    #[error("correction lives on level {found}, expected {expected}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("no finer state to return to")]
    NoPredecessor,
    #[error("cannot prolongate from the finest level")]
    ProlongFromFinest,
    #[error("program generation needs a finished state on the finest level")]
    NotFinished,
    #[error("malformed graph: {0}")]
    Malformed(String),
}
