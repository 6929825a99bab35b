//! Runs generated multigrid programs on benchmark problems, either as a
//! stationary iteration or as the preconditioner of BiCGSTAB, and turns the
//! outcome into search objectives.

mod backend;
mod error;
mod gp;
mod metric;
mod run;
mod tree;

pub use backend::{Hierarchy, Session};
pub use error::EvalError;
pub use gp::{Prepared, ProblemEvaluator};
pub use metric::{csv_row, fitness_of, iterations_needed, rank_metric, Objectives, CSV_HEADER};
pub use run::{
    run_iterative, run_iterative_on, run_preconditioned, run_preconditioned_on, run_preconditioned_with, RunOptions, SolveReport, Timing,
    DIVERGENCE_FACTOR, MODEL_SECONDS_PER_UNIT,
};

pub use tree::cycle_tree;

pub type Result<T> = std::result::Result<T, EvalError>;
