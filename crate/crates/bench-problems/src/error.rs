use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown problem `{0}`")]
    Unknown(String),
    #[error("invalid level range: {0}")]
    Levels(String),
    #[error("wavenumber {0} does not give a dyadic grid at kh = 0.625")]
    Wavenumber(f64),
    #[error("invalid cycle: {0}")]
    Cycle(String),
    #[error(transparent)]
    Grid(#[from] grid_core::GridError),
    #[error(transparent)]
    Ir(#[from] mg_ir::IrError),
}
