//! Benchmark discretizations (Poisson in 2D and 3D, linear elasticity,
//! Helmholtz with a shifted-Laplacian preconditioner) and hand-built
//! reference multigrid cycles.

mod cycle;
mod elasticity;
mod error;
mod helmholtz;
mod poisson;
mod problem;
mod registry;

pub use cycle::{reference_cycle, reference_program, CycleKind, CycleSpec};
pub use elasticity::{elasticity_2d, elasticity_operator, mixed_derivative, ALPHA, BETA};
pub use error::ProblemError;
pub use helmholtz::{helmholtz_2d, helmholtz_operator, level_for_wavenumber, KH};
pub use poisson::{laplace_stencil, poisson_2d, poisson_3d};
pub use problem::{boundary_contribution, rhs_with_boundary, Level, Problem};
pub use registry::{build, AnyProblem, ProblemConfig, NAMES};

pub type Result<T> = std::result::Result<T, ProblemError>;
