use grid_core::Complex64;

use crate::helmholtz::KH;
use crate::{elasticity_2d, helmholtz_2d, poisson_2d, poisson_3d, Problem, ProblemError, Result};

pub const NAMES: [&str; 4] = ["poisson2d", "poisson3d", "elasticity2d", "helmholtz2d"];

/// Selects a benchmark by name. Unset sizes fall back to the benchmark defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemConfig {
    pub name: String,
    pub l_max: Option<u32>,
    /// Helmholtz only; overrides `l_max` when both are given.
    pub wavenumber: Option<f64>,
    /// Number of levels, at most five.
    pub depth: Option<usize>,
}

impl ProblemConfig {
    pub fn named(name: &str) -> Self {
        Self { name: name.into(), ..Self::default() }
    }
}

/// A problem of either scalar kind.
#[derive(Clone, Debug)]
pub enum AnyProblem {
    Real(Problem<f64>),
    Complex(Problem<Complex64>),
}

macro_rules! both {
    ($self:expr, $p:ident => $e:expr) => {
        match $self {
            AnyProblem::Real($p) => $e,
            AnyProblem::Complex($p) => $e,
        }
    };
}

impl AnyProblem {
    pub fn name(&self) -> &str {
        both!(self, p => &p.name)
    }
    pub fn dim(&self) -> usize {
        both!(self, p => p.dim)
    }
    pub fn depth(&self) -> usize {
        both!(self, p => p.depth())
    }
    pub fn l_max(&self) -> u32 {
        both!(self, p => p.l_max)
    }
    pub fn unknowns(&self) -> usize {
        both!(self, p => p.unknowns())
    }
    pub fn epsilon(&self) -> f64 {
        both!(self, p => p.epsilon)
    }
    pub fn set_epsilon(&mut self, eps: f64) {
        both!(self, p => p.epsilon = eps)
    }
}

pub fn build(cfg: &ProblemConfig) -> Result<AnyProblem> {
    let p = match cfg.name.as_str() {
        "poisson2d" => AnyProblem::Real(poisson_2d(cfg.l_max.unwrap_or(11))?),
        "poisson3d" => AnyProblem::Real(poisson_3d(cfg.l_max.unwrap_or(7))?),
        "elasticity2d" => AnyProblem::Real(elasticity_2d(cfg.l_max.unwrap_or(10))?),
        "helmholtz2d" => {
            let k = match (cfg.wavenumber, cfg.l_max) {
                (Some(k), _) => k,
                (None, Some(l)) => KH * 2f64.powi(l as i32),
                (None, None) => 80.0,
            };
            AnyProblem::Complex(helmholtz_2d(k)?)
        }
        other => return Err(ProblemError::Unknown(other.into())),
    };
    match cfg.depth {
        None => Ok(p),
        Some(d) => Ok(match p {
            AnyProblem::Real(p) => AnyProblem::Real(p.truncate(d)?),
            AnyProblem::Complex(p) => AnyProblem::Complex(p.truncate(d)?),
        }),
    }
}
