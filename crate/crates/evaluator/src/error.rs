use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("program uses level {level} but the problem has {depth} levels")]
    Level { level: usize, depth: usize },
    #[error("preconditioned solve requested for a problem without a preconditioner")]
    NoPreconditioner,
    #[error(transparent)]
    Grid(#[from] grid_core::GridError),
    #[error(transparent)]
    Component(#[from] mg_components::ComponentError),
    #[error(transparent)]
    Ir(#[from] mg_ir::IrError),
    #[error(transparent)]
    Grammar(#[from] mg_grammar::GrammarError),
    #[error(transparent)]
    Problem(#[from] bench_problems::ProblemError),
}
