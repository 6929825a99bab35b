use gp_engine::Fitness;

use crate::SolveReport;

/// Which pair of objectives a search minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objectives {
    /// Time per iteration and convergence factor.
    TimeRho,
    /// Time per iteration and iteration count, for preconditioners.
    TimeIterations,
}

impl Objectives {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "t,rho" | "time-rho" => Some(Self::TimeRho),
            "t,n" | "time-iterations" => Some(Self::TimeIterations),
            _ => None,
        }
    }
}

pub fn fitness_of(report: &SolveReport, mode: Objectives) -> Fitness {
    if !report.converged {
        return Fitness::failed();
    }
    let second = match mode {
        Objectives::TimeRho => report.convergence_factor,
        Objectives::TimeIterations => report.iterations as f64,
    };
    Fitness::new(report.time_per_iteration, second).sanitized()
}

/// Iterations a method with factor `rho` needs to reduce the residual by `epsilon`.
pub fn iterations_needed(rho: f64, epsilon: f64) -> f64 {
    if !(rho < 1.0) {
        return f64::INFINITY;
    }
    if rho <= 0.0 {
        return 1.0;
    }
    // guard against 12.000000000000002 style round-off before rounding up
    (epsilon.ln() / rho.ln() - 1e-9).ceil()
}

/// Estimated time to solve: `t log ε / log ρ`, or `t n` for the iteration-count objective.
/// Failed fitnesses and `ρ >= 1` rank at infinity.
pub fn rank_metric(f: &Fitness, mode: Objectives, epsilon: f64) -> f64 {
    if f.is_failed() {
        return f64::INFINITY;
    }
    let [t, second] = f.objectives;
    match mode {
        Objectives::TimeIterations => t * second,
        Objectives::TimeRho if second >= 1.0 => f64::INFINITY,
        Objectives::TimeRho if second <= 0.0 => 0.0,
        Objectives::TimeRho => t * epsilon.ln() / second.ln(),
    }
}

pub const CSV_HEADER: &str = "key,level,iterations,time_per_iteration,convergence_factor,converged,rank_metric";

/// One report line: tree key, level, n, t, ρ, converged, rank metric.
pub fn csv_row(key: &str, level: usize, report: &SolveReport, rank: f64) -> String {
    format!(
        "\"{}\",{},{},{:e},{},{},{:e}",
        key.replace('"', "\"\""),
        level,
        report.iterations,
        report.time_per_iteration,
        report.convergence_factor,
        report.converged,
        rank
    )
}
