use grid_core::GridError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComponentError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("zero diagonal entry at unknown {0}")]
    ZeroDiagonal(usize),
    #[error("singular block matrix for block at {0:?}")]
    SingularBlock([usize; 3]),
    #[error("invalid smoother: {0}")]
    InvalidSmoother(String),
    #[error("unsupported dimensionality {0}")]
    UnsupportedDim(usize),
    #[error("shape mismatch between operator and grid functions")]
    ShapeMismatch,
}
