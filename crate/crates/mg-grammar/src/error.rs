use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrammarError {
    #[error("grammar needs at least two levels, got {0}")]
    TooShallow(usize),
    #[error("empty menu: {0}")]
    EmptyMenu(&'static str),
    #[error("token {index}: unknown symbol `{name}`")]
    UnknownSymbol { index: usize, name: String },
    #[error("token {index}: no version of `{name}` accepts the argument types {args}")]
    NoMatchingVersion { index: usize, name: String, args: String },
    #[error("token stream ended early after {0} tokens")]
    Truncated(usize),
    #[error("token {index}: {count} trailing tokens")]
    Trailing { index: usize, count: usize },
    #[error("tree does not type-check: {0}")]
    TypeCheck(String),
    #[error(transparent)]
    Ir(#[from] mg_ir::IrError),
}
