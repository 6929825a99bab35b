use std::f64::consts::PI;

use grid_core::{GridDesc, Operator, Scalar, Stencil};
use mg_components::{CoarseSolverKind, RestrictionKind};

use crate::problem::{default_depth, rhs_with_boundary, Level, Problem};
use crate::Result;

/// `-∇²_h` on a grid with uniform spacing `h`: `2d/h²` at the centre, `-1/h²` on the axes.
pub fn laplace_stencil<T: Scalar>(d: usize, h: f64) -> Stencil<T> {
    let s = 1.0 / (h * h);
    let mut entries = vec![([0; 3], T::from_re(2.0 * d as f64 * s))];
    for k in 0..d {
        for sign in [-1, 1] {
            let mut o = [0; 3];
            o[k] = sign;
            entries.push((o, T::from_re(-s)));
        }
    }
    Stencil::from_padded(d, entries)
}

fn poisson(
    name: &str,
    d: usize,
    l_max: u32,
    f: impl Fn([f64; 3]) -> f64,
    g: impl Fn([f64; 3]) -> f64,
) -> Result<Problem<f64>> {
    let depth = default_depth(l_max)?;
    let levels: Vec<Level<f64>> = (0..depth)
        .map(|i| {
            let grid = GridDesc::unit(d, l_max - i as u32);
            let a = Operator::scalar(laplace_stencil(d, grid.spacing[0]));
            Level { grid, a, m: None }
        })
        .collect();
    let fine = &levels[0];
    let rhs = rhs_with_boundary(&fine.a.stencil, &fine.grid, |_, x| f(x), |_, x| g(x));
    Ok(Problem {
        name: name.into(),
        dim: d,
        components: 1,
        l_max,
        levels,
        rhs,
        epsilon: 1e-12,
        coarse_solver: CoarseSolverKind::Cg,
        restriction: RestrictionKind::FullWeighting,
    })
}

/// `-∇²u = π²cos(πx) - 4π²sin(2πy)` on the unit square with `u = cos(πx) - sin(πy)` on the boundary.
pub fn poisson_2d(l_max: u32) -> Result<Problem<f64>> {
    poisson(
        "poisson2d",
        2,
        l_max,
        |x| PI * PI * (PI * x[0]).cos() - 4.0 * PI * PI * (2.0 * PI * x[1]).sin(),
        |x| (PI * x[0]).cos() - (PI * x[1]).sin(),
    )
}

/// `-∇²u = x² - y²/2 - z²/2` on the unit cube, homogeneous Dirichlet data.
pub fn poisson_3d(l_max: u32) -> Result<Problem<f64>> {
    poisson("poisson3d", 3, l_max, |x| x[0] * x[0] - 0.5 * x[1] * x[1] - 0.5 * x[2] * x[2], |_| 0.0)
}

