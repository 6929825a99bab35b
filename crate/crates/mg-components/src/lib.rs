//! Building blocks offered to the multigrid grammar: smoothers, inter-grid
//! transfer stencils and Krylov solvers for the coarsest level.

mod error;
mod krylov;
mod smoother;
mod transfer;

pub use error::ComponentError;
pub use krylov::{bicgstab, bicgstab_solve, cg_solve, CoarseSolverKind, CoarseSolverSpec, SolveStats};
pub use smoother::{
    block_shapes, omega, smooth_block_jacobi, smooth_jacobi, smooth_jacobi_collective, smooth_rbgs, Partition,
    Relaxation, SmootherKind, SmootherSpec, OMEGA_COUNT,
};
pub use transfer::{make_prolongation, make_restriction, RestrictionKind};

pub type Result<T> = std::result::Result<T, ComponentError>;
