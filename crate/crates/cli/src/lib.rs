//! Experiment runner behind the `mgsynth` binary: evolutionary search,
//! evaluation of stored trees, reference benchmarks and cycle diagrams.

mod commands;
mod config;
mod diagram;

pub use commands::{
    cmd_bench, cmd_evaluate, cmd_evolve, cmd_render, cmd_tree, cycle_spec, emit, objectives_name, omega_index,
    parse_cycle, schedule_levels, timing_name, EvolveOutcome, FrontRow, TreeFile, BENCH_HEADER, FRONT_HEADER,
};
pub use config::{
    parse_timing, EvaluationSection, GrammarSection, Manifest, ProblemSection, SearchSection, DEFAULT_KRYLOV_ITERATIONS,
    DEFAULT_RHO_LIMIT,
};
pub use diagram::cycle_diagram;

/// Failures are split by exit status: bad input exits with 2, a failed run with 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("run failed: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}
