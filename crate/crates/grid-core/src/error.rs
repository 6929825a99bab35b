use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("dimensionality mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("component count mismatch: expected {expected}, found {found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("duplicate stencil offset {0:?}")]
    DuplicateOffset(Vec<i32>),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grids are not nested: fine {fine:?}, coarse {coarse:?}")]
    NonNested { fine: Vec<usize>, coarse: Vec<usize> },
    #[error("stencil has no invertible diagonal entry")]
    SingularDiagonal,
    #[error("unsupported dimensionality {0}")]
    UnsupportedDim(usize),
}
