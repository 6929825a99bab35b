//! Typed context-free grammar whose words are multigrid methods.

mod count;
mod error;
mod grammar;
mod tree;

pub use count::count_lower_bound;
pub use error::GrammarError;
pub use grammar::{generate_grammar, GrammarConfig, PrimitiveSet, Symbol, SymbolKind, TypeId, TypeTag};
pub use tree::{compile, compile_program, DerivationTree};

pub type Result<T> = std::result::Result<T, GrammarError>;
