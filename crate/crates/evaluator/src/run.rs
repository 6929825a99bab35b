use std::time::Instant;

use bench_problems::Problem;
use grid_core::{GridFunction, Scalar};
use mg_components::bicgstab;
use mg_ir::{execute, Program};

use crate::{EvalError, Hierarchy, Result};

/// Residual growth beyond this factor counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

/// Model time charged per unit of counted work (stencil entry times point).
pub const MODEL_SECONDS_PER_UNIT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Timing {
    /// Monotonic clock around full solves.
    Wall,
    /// Deterministic work count, for reproducible fronts.
    Model,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Timed solves averaged for `t`, after one untimed warm-up solve.
    pub repeats: usize,
    pub timing: Timing,
}

impl RunOptions {
    pub fn new(epsilon: f64, max_iterations: usize) -> Self {
        Self { epsilon, max_iterations, repeats: 3, timing: Timing::Wall }
    }

    pub fn timing(mut self, timing: Timing) -> Self {
        self.timing = timing;
        self
    }

    pub fn repeats(mut self, repeats: usize) -> Self {
        self.repeats = repeats;
        self
    }
}

/// Outcome of solving one problem with one program.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Seconds per iteration (or model seconds).
    pub time_per_iteration: f64,
    /// Geometric mean of the per-iteration residual ratios; 1 when no iteration ran.
    pub convergence_factor: f64,
    pub converged: bool,
    pub diverged: bool,
    pub final_relative_residual: f64,
}

struct Trace {
    iterations: usize,
    converged: bool,
    diverged: bool,
    relative: f64,
    cost: u64,
}

impl Trace {
    fn into_report(self, time_per_iteration: f64) -> SolveReport {
        let rho = if self.iterations == 0 {
            1.0
        } else if self.relative.is_finite() {
            self.relative.powf(1.0 / self.iterations as f64)
        } else {
            f64::INFINITY
        };
        SolveReport {
            iterations: self.iterations,
            time_per_iteration,
            convergence_factor: rho,
            converged: self.converged,
            diverged: self.diverged,
            final_relative_residual: self.relative,
        }
    }
}

fn iterate<T: Scalar>(program: &Program, problem: &Problem<T>, h: &Hierarchy<T>, opts: &RunOptions) -> Result<Trace> {
    let a = &problem.finest().a;
    let b = &problem.rhs;
    let mut be = h.session();
    let mut x = GridFunction::zeros(&b.grid, b.components);
    let r0 = a.residual(&x, b)?.norm();
    let mut trace = Trace { iterations: 0, converged: r0 == 0.0, diverged: false, relative: 0.0, cost: 0 };
    if r0 == 0.0 {
        return Ok(trace);
    }
    trace.relative = 1.0;
    trace.converged = trace.relative <= opts.epsilon;
    while !trace.converged && trace.iterations < opts.max_iterations {
        x = execute(program, &mut be, &x, b)?;
        trace.iterations += 1;
        let r = a.residual(&x, b)?.norm();
        trace.relative = r / r0;
        if !trace.relative.is_finite() || trace.relative > DIVERGENCE_FACTOR {
            trace.diverged = true;
            break;
        }
        trace.converged = trace.relative <= opts.epsilon;
    }
    trace.cost = be.cost;
    Ok(trace)
}

fn timed<T>(opts: &RunOptions, trace: &Trace, mut solve: impl FnMut() -> Result<T>) -> Result<f64> {
    if trace.iterations == 0 {
        return Ok(0.0);
    }
    match opts.timing {
        Timing::Model => Ok(trace.cost as f64 * MODEL_SECONDS_PER_UNIT / trace.iterations as f64),
        Timing::Wall => {
            if !trace.converged {
                // sentinel fitness anyway, skip the timing runs
                return Ok(f64::INFINITY);
            }
            let repeats = opts.repeats.max(1);
            let mut total = 0.0;
            for _ in 0..repeats {
                let start = Instant::now();
                solve()?;
                total += start.elapsed().as_secs_f64();
            }
            Ok(total / (repeats * trace.iterations) as f64)
        }
    }
}

/// Applies the program as a stationary iteration from a zero initial guess
/// until the residual drops by `epsilon` or the cap is reached. The first
/// solve determines the iteration count and doubles as the timing warm-up.
pub fn run_iterative<T: Scalar>(program: &Program, problem: &Problem<T>, opts: &RunOptions) -> Result<SolveReport> {
    let h = Hierarchy::new(problem)?;
    run_iterative_on(program, problem, &h, opts)
}

/// [`run_iterative`] with a prebuilt hierarchy, so smoother inverses are reused.
pub fn run_iterative_on<T: Scalar>(
    program: &Program,
    problem: &Problem<T>,
    h: &Hierarchy<T>,
    opts: &RunOptions,
) -> Result<SolveReport> {
    let trace = iterate(program, problem, h, opts)?;
    let t = timed(opts, &trace, || iterate(program, problem, h, opts))?;
    Ok(trace.into_report(t))
}

/// Right-preconditioned BiCGSTAB on the problem's system operator, with one
/// application of the program from a zero guess as each preconditioner solve.
pub fn run_preconditioned<T: Scalar>(program: &Program, problem: &Problem<T>, opts: &RunOptions) -> Result<SolveReport> {
    let h = Hierarchy::new(problem)?;
    run_preconditioned_on(program, problem, &h, opts)
}

/// [`run_preconditioned`] with a prebuilt hierarchy.
pub fn run_preconditioned_on<T: Scalar>(
    program: &Program,
    problem: &Problem<T>,
    h: &Hierarchy<T>,
    opts: &RunOptions,
) -> Result<SolveReport> {
    if !problem.is_preconditioned() {
        return Err(EvalError::NoPreconditioner);
    }
    let mut be = h.session();
    let zero = GridFunction::zeros(&problem.rhs.grid, problem.rhs.components);
    let mut failure = None;
    let trace = krylov(problem, opts, |p| match execute(program, &mut be, &zero, p) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            poisoned(p)
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let trace = Trace { cost: be.cost, ..trace };
    let t = timed(opts, &trace, || {
        let mut be = h.session();
        Ok(krylov(problem, opts, |p| execute(program, &mut be, &zero, p).unwrap_or_else(|_| poisoned(p))))
    })?;
    Ok(trace.into_report(t))
}

/// Same outer iteration with a caller-supplied preconditioner solve.
pub fn run_preconditioned_with<T: Scalar>(
    problem: &Problem<T>,
    opts: &RunOptions,
    precond: impl FnMut(&GridFunction<T>) -> GridFunction<T>,
) -> SolveReport {
    krylov(problem, opts, precond).into_report(0.0)
}

fn poisoned<T: Scalar>(like: &GridFunction<T>) -> GridFunction<T> {
    let mut v = like.clone();
    v.fill(T::from_re(f64::NAN));
    v
}

fn krylov<T: Scalar>(
    problem: &Problem<T>,
    opts: &RunOptions,
    precond: impl FnMut(&GridFunction<T>) -> GridFunction<T>,
) -> Trace {
    let a = &problem.finest().a;
    let b = &problem.rhs;
    let x0 = GridFunction::zeros(&b.grid, b.components);
    let (_, stats) = bicgstab(|v| a.apply(v).expect("shapes match"), precond, b, &x0, opts.epsilon, opts.max_iterations);
    let r0 = stats.residuals.first().copied().unwrap_or(0.0);
    let last = stats.residuals.last().copied().unwrap_or(0.0);
    let relative = if r0 > 0.0 { last / r0 } else { 0.0 };
    Trace {
        iterations: stats.iterations,
        converged: stats.converged,
        diverged: stats.breakdown || !relative.is_finite(),
        relative,
        cost: 0,
    }
}
