//! Grammar-guided genetic programming over multigrid derivation trees.

mod error;
mod evolve;
mod fitness;
mod init;
mod nsga2;
mod variation;

pub use error::GpError;
pub use evolve::{
    evolve, rng_for, ArchiveEntry, Checkpoint, EvolveResult, Evaluator, GenerationStats, Individual, SearchConfig, Stage,
};
pub use fitness::{Fitness, FAILED};
pub use init::{gen_grow, terminal_ratio};
pub use mg_grammar::DerivationTree;
pub use nsga2::{crowding, dominates, nsga2_fronts, select_elitist, select_parents};
pub use variation::{crossover_subtree, mutate_subtree, VariationConfig};

pub type Result<T> = std::result::Result<T, GpError>;
