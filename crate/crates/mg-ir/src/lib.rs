//! Symbolic multigrid states, the transitions between them, and lowering of
//! the resulting expression graph into a straight-line solver program.

mod dot;
mod error;
mod exec;
mod ir;
mod program;

pub use dot::to_dot;
pub use error::IrError;
pub use exec::{eval_recursive, execute, Backend};
pub use ir::{level_name, Coloring, Input, Ir, Node, NodeId, Op, State};
pub use program::{generate_program, Expr, Field, Instr, Program};

pub type Result<T> = std::result::Result<T, IrError>;
