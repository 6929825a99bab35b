use std::f64::consts::PI;

use grid_core::{GridDesc, Operator, Stencil, SystemStencil};
use mg_components::{CoarseSolverKind, RestrictionKind};

use crate::poisson::laplace_stencil;
use crate::problem::{default_depth, rhs_with_boundary, Level, Problem};
use crate::Result;

pub const ALPHA: f64 = 195.0;
pub const BETA: f64 = 130.0;

/// Central `∂²/∂x∂y`: `1/(4h²) [[-1 0 1], [0 0 0], [1 0 -1]]`, top row at `y + h`.
pub fn mixed_derivative(h: f64) -> Stencil<f64> {
    let s = 0.25 / (h * h);
    Stencil::from_padded(2, [([1, 1, 0], s), ([-1, -1, 0], s), ([1, -1, 0], -s), ([-1, 1, 0], -s)])
}

/// `-∂²/∂x_k²` along axis `k`.
fn neg_second(k: usize, h: f64) -> Stencil<f64> {
    let s = 1.0 / (h * h);
    let mut m = [0; 3];
    let mut p = [0; 3];
    m[k] = -1;
    p[k] = 1;
    Stencil::from_padded(2, [([0; 3], 2.0 * s), (m, -s), (p, -s)])
}

/// Negated Navier-Lamé block operator, which is symmetric positive definite:
/// `-[[(α+β)∂xx + α∇², (α+β)∂xy], [(α+β)∂xy, (α+β)∂yy + α∇²]]`.
pub fn elasticity_operator(h: f64) -> Operator<f64> {
    let ab = ALPHA + BETA;
    let lap = laplace_stencil::<f64>(2, h).scale(ALPHA);
    let diag = |k| neg_second(k, h).scale(ab).add(&lap).expect("same dimension");
    let off = mixed_derivative(h).scale(-ab);
    let block = vec![vec![diag(0), off.clone()], vec![off, diag(1)]];
    Operator::new(SystemStencil::new(block).expect("square 2x2 block"))
}

/// Displacements `(u, v)` with zero body force, `u = 0` and
/// `v = 0.4 (1-x) x y sin(πx)` on the boundary of the unit square.
pub fn elasticity_2d(l_max: u32) -> Result<Problem<f64>> {
    let depth = default_depth(l_max)?;
    let levels: Vec<Level<f64>> = (0..depth)
        .map(|i| {
            let grid = GridDesc::unit(2, l_max - i as u32);
            let a = elasticity_operator(grid.spacing[0]);
            Level { grid, a, m: None }
        })
        .collect();
    let g = |c: usize, x: [f64; 3]| if c == 0 { 0.0 } else { 0.4 * (1.0 - x[0]) * x[0] * x[1] * (PI * x[0]).sin() };
    let fine = &levels[0];
    let rhs = rhs_with_boundary(&fine.a.stencil, &fine.grid, |_, _| 0.0, g);
    Ok(Problem {
        name: "elasticity2d".into(),
        dim: 2,
        components: 2,
        l_max,
        levels,
        rhs,
        epsilon: 1e-12,
        coarse_solver: CoarseSolverKind::Cg,
        restriction: RestrictionKind::FullWeighting,
    })
}
