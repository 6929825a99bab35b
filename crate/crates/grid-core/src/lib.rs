//! Uniform structured grids, grid functions and the stencil algebra.
//!
//! Everything here is dimension-generic up to three spatial dimensions and
//! generic over the scalar type (`f64` or `Complex64`). Points are ordered
//! lexicographically with x running fastest. Multi-component grid functions
//! store one contiguous block per component.

mod apply;
mod assemble;
mod error;
mod grid;
mod operator;
mod scalar;
mod stencil;
mod transfer;

pub use apply::{apply_add, stencil_apply, Boundary};
pub use assemble::{assemble_matrix, assemble_operator, assemble_prolongation, assemble_restriction, assemble_system};
pub use error::GridError;
pub use grid::{GridDesc, GridFunction};
pub use operator::{Operator, SystemStencil};
pub use scalar::Scalar;
pub use stencil::{lex_cmp, Offset, Stencil};
pub use transfer::{prolong_apply, restrict_apply};

pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, GridError>;
