use std::collections::HashMap;

use bench_problems::{build, AnyProblem, Problem, ProblemConfig};
use gp_engine::{Evaluator, Fitness, Stage};
use grid_core::{Complex64, Scalar};
use mg_grammar::{compile_program, DerivationTree};
use mg_ir::Program;

use crate::{fitness_of, run_iterative_on, run_preconditioned_on, Hierarchy, Objectives, Result, RunOptions, SolveReport};

/// A problem with its prebuilt hierarchy.
pub enum Prepared {
    Real(Problem<f64>, Hierarchy<f64>),
    Complex(Problem<Complex64>, Hierarchy<Complex64>),
}

fn solve<T: Scalar>(program: &Program, p: &Problem<T>, h: &Hierarchy<T>, opts: &RunOptions) -> Result<SolveReport> {
    if p.is_preconditioned() {
        run_preconditioned_on(program, p, h, opts)
    } else {
        run_iterative_on(program, p, h, opts)
    }
}

impl Prepared {
    pub fn new(problem: AnyProblem) -> Result<Self> {
        Ok(match problem {
            AnyProblem::Real(p) => {
                let h = Hierarchy::new(&p)?;
                Prepared::Real(p, h)
            }
            AnyProblem::Complex(p) => {
                let h = Hierarchy::new(&p)?;
                Prepared::Complex(p, h)
            }
        })
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            Prepared::Real(p, _) => p.epsilon,
            Prepared::Complex(p, _) => p.epsilon,
        }
    }

    /// Runs the program as a solver, or as a preconditioner if the problem has one.
    pub fn solve(&self, program: &Program, opts: &RunOptions) -> Result<SolveReport> {
        match self {
            Prepared::Real(p, h) => solve(program, p, h, opts),
            Prepared::Complex(p, h) => solve(program, p, h, opts),
        }
    }
}

/// Scores derivation trees on a named benchmark, one problem instance per
/// finest level in the schedule.
pub struct ProblemEvaluator {
    problems: HashMap<usize, Prepared>,
    objectives: Objectives,
    options: RunOptions,
    epsilon: Option<f64>,
}

impl ProblemEvaluator {
    /// `options.epsilon` is replaced by each problem's own target reduction
    /// unless [`with_epsilon`](Self::with_epsilon) overrides it.
    pub fn new(cfg: &ProblemConfig, levels: &[usize], objectives: Objectives, options: RunOptions) -> Result<Self> {
        let mut problems = HashMap::new();
        for &l in levels {
            let c = ProblemConfig { l_max: Some(l as u32), wavenumber: None, ..cfg.clone() };
            problems.insert(l, Prepared::new(build(&c)?)?);
        }
        Ok(Self { problems, objectives, options, epsilon: None })
    }

    pub fn with_epsilon(mut self, epsilon: Option<f64>) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn objectives(&self) -> Objectives {
        self.objectives
    }

    /// Target reduction used on `level`.
    pub fn epsilon(&self, level: usize) -> Option<f64> {
        self.epsilon.or_else(|| self.problems.get(&level).map(Prepared::epsilon))
    }

    pub fn problem(&self, level: usize) -> Option<&Prepared> {
        self.problems.get(&level)
    }

    pub fn report(&self, tree: &DerivationTree, stage: &Stage) -> Result<Option<SolveReport>> {
        let Some(p) = self.problems.get(&stage.level) else {
            return Ok(None);
        };
        let program = compile_program(tree, &stage.pset)?;
        let opts = RunOptions { epsilon: self.epsilon.unwrap_or(p.epsilon()), ..self.options.clone() };
        p.solve(&program, &opts).map(Some)
    }
}

impl Evaluator for ProblemEvaluator {
    fn evaluate(&self, tree: &DerivationTree, stage: &Stage) -> Fitness {
        match self.report(tree, stage) {
            Ok(Some(r)) => fitness_of(&r, self.objectives),
            _ => Fitness::failed(),
        }
    }
}
