use thiserror::Error;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint format: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Grammar(#[from] mg_grammar::GrammarError),
    #[error("thread pool: {0}")]
    Pool(String),
}
