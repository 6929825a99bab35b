//! Run manifest: a TOML file with one table per component.

use std::path::Path;

use gp_engine::{SearchConfig, VariationConfig};
use mg_components::SmootherKind;
use mg_evaluator::{Objectives, Timing};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Manifest {
    pub problem: ProblemSection,
    pub search: SearchSection,
    pub grammar: GrammarSection,
    pub evaluation: EvaluationSection,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSection {
    pub name: String,
    /// Finest levels of the generalization schedule, strictly increasing.
    pub levels: Vec<usize>,
    pub wavenumber: Option<f64>,
    /// Overrides the problem's target residual reduction.
    pub epsilon: Option<f64>,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self { name: "poisson2d".into(), levels: vec![], wavenumber: None, epsilon: None }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSection {
    pub mu: usize,
    pub lambda: usize,
    pub generations: usize,
    pub initial_population_size: usize,
    pub crossover_probability: f64,
    pub terminal_mutation_probability: f64,
    pub mutation_depth: [usize; 2],
    pub max_size: usize,
    pub grow_depth: [usize; 2],
    pub generalization_interval: usize,
    pub seed: u64,
    pub workers: usize,
    pub random_search: bool,
    /// Front members re-evaluated after the search, best rank metric first.
    pub top: usize,
}

impl Default for SearchSection {
    fn default() -> Self {
        let s = SearchConfig::default();
        Self {
            mu: s.mu,
            lambda: s.lambda,
            generations: s.generations,
            initial_population_size: s.initial_population_size,
            crossover_probability: s.crossover_probability,
            terminal_mutation_probability: s.variation.terminal_mutation_probability,
            mutation_depth: [s.variation.mutation_depth.0, s.variation.mutation_depth.1],
            max_size: s.variation.max_size,
            grow_depth: [s.grow_depth.0, s.grow_depth.1],
            generalization_interval: s.generalization_interval,
            seed: s.seed,
            workers: s.workers,
            random_search: s.random_search,
            top: 50,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GrammarSection {
    pub smoothers: Vec<String>,
    pub early_solve: bool,
    /// Relaxation factor indices on offer; all when absent.
    pub omegas: Option<Vec<usize>>,
}

impl Default for GrammarSection {
    fn default() -> Self {
        Self { smoothers: vec!["jacobi".into(), "rbgs".into()], early_solve: true, omegas: None }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationSection {
    /// `t,rho` or `t,n`; defaults by problem.
    pub objectives: Option<String>,
    pub max_iterations: Option<usize>,
    pub repeats: usize,
    /// `wall` or `model`.
    pub timing: String,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        Self { objectives: None, max_iterations: None, repeats: 3, timing: "wall".into() }
    }
}

/// Slowest average convergence factor a stand-alone solver may have by default.
pub const DEFAULT_RHO_LIMIT: f64 = 0.5;
/// Target reduction assumed for the budget when the manifest sets none.
const STANDALONE_EPSILON: f64 = 1e-12;
/// Default budget for preconditioned BiCGSTAB.
pub const DEFAULT_KRYLOV_ITERATIONS: usize = 20_000;

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn is_helmholtz(&self) -> bool {
        self.problem.name == "helmholtz2d"
    }

    pub fn objectives(&self) -> Result<Objectives, CliError> {
        match &self.evaluation.objectives {
            Some(s) => Objectives::parse(s).ok_or_else(|| CliError::Config(format!("unknown objectives `{s}`"))),
            None if self.is_helmholtz() => Ok(Objectives::TimeIterations),
            None => Ok(Objectives::TimeRho),
        }
    }

    /// Without an explicit budget a stand-alone solver gets the largest `n`
    /// for which reaching ε within `n` steps implies ρ below [`DEFAULT_RHO_LIMIT`].
    pub fn max_iterations(&self) -> usize {
        match self.evaluation.max_iterations {
            Some(n) => n,
            None if self.is_helmholtz() => DEFAULT_KRYLOV_ITERATIONS,
            None => {
                let eps = self.problem.epsilon.unwrap_or(STANDALONE_EPSILON);
                let n = eps.ln() / DEFAULT_RHO_LIMIT.ln();
                (n.ceil() as usize).saturating_sub(1).max(1)
            }
        }
    }

    pub fn timing(&self) -> Result<Timing, CliError> {
        parse_timing(&self.evaluation.timing)
    }

    pub fn smoothers(&self) -> Result<Vec<SmootherKind>, CliError> {
        self.grammar
            .smoothers
            .iter()
            .map(|s| SmootherKind::parse(s).ok_or_else(|| CliError::Config(format!("unknown smoother `{s}`"))))
            .collect()
    }

    pub fn search_config(&self) -> SearchConfig {
        let s = &self.search;
        SearchConfig {
            mu: s.mu,
            lambda: s.lambda,
            generations: s.generations,
            initial_population_size: s.initial_population_size,
            crossover_probability: s.crossover_probability,
            grow_depth: (s.grow_depth[0], s.grow_depth[1]),
            variation: VariationConfig {
                terminal_mutation_probability: s.terminal_mutation_probability,
                mutation_depth: (s.mutation_depth[0], s.mutation_depth[1]),
                max_size: s.max_size,
            },
            generalization_interval: s.generalization_interval,
            seed: s.seed,
            workers: s.workers,
            random_search: s.random_search,
            checkpoint_dir: None,
        }
    }

    /// Schedule levels must be strictly increasing.
    pub fn validate(&self) -> Result<(), CliError> {
        if !bench_problems::NAMES.contains(&self.problem.name.as_str()) {
            return Err(CliError::Config(format!("unknown problem `{}`", self.problem.name)));
        }
        if self.problem.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(format!("levels {:?} are not strictly increasing", self.problem.levels)));
        }
        if let Some(e) = self.problem.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return Err(CliError::Config(format!("epsilon {e} outside (0, 1)")));
            }
        }
        self.objectives()?;
        self.timing()?;
        self.smoothers()?;
        self.search_config().validate().map_err(|e| CliError::Config(e.to_string()))
    }
}

pub fn parse_timing(s: &str) -> Result<Timing, CliError> {
    match s {
        "wall" => Ok(Timing::Wall),
        "model" => Ok(Timing::Model),
        other => Err(CliError::Config(format!("unknown timing mode `{other}`"))),
    }
}
