use grid_core::{Complex64, GridDesc, GridFunction, Operator, Stencil};
use mg_components::{CoarseSolverKind, RestrictionKind};

use crate::problem::{default_depth, Level, Problem};
use crate::{ProblemError, Result};

/// Points per wavelength rule: `k h` on the finest grid.
pub const KH: f64 = 0.625;

/// Finest level for wavenumber `k`, i.e. the `l` with `0.625 / k = 2^-l`.
pub fn level_for_wavenumber(k: f64) -> Result<u32> {
    let ratio = k / KH;
    if !(ratio.is_finite() && ratio >= 4.0) {
        return Err(ProblemError::Wavenumber(k));
    }
    let l = ratio.log2().round();
    if (2f64.powi(l as i32) - ratio).abs() > 1e-9 * ratio {
        return Err(ProblemError::Wavenumber(k));
    }
    Ok(l as u32)
}

/// `1/h² [-1; -1, 4 - s (kh)², -1; -1]` on `grid`, plus the Robin closure on
/// the left and right edges. `s = 1` gives the Helmholtz operator and
/// `s = 1 + 0.5i` the shifted Laplacian.
pub fn helmholtz_operator(grid: &GridDesc, k: f64, s: Complex64) -> Operator<Complex64> {
    let h = grid.spacing[0];
    let inv = 1.0 / (h * h);
    let kh2 = (k * h) * (k * h);
    let centre = (Complex64::new(4.0, 0.0) - s * kh2) * inv;
    let side = Complex64::new(-inv, 0.0);
    let stencil = Stencil::from_padded(
        2,
        [([0, 0, 0], centre), ([-1, 0, 0], side), ([1, 0, 0], side), ([0, -1, 0], side), ([0, 1, 0], side)],
    );
    // Robin data eliminates the boundary value: u_0 = γ u_1 with γ from a
    // centred difference at the half point, folded into the diagonal.
    let t = Complex64::new(0.0, 0.5 * k * h);
    let gamma = (Complex64::new(1.0, 0.0) + t) / (Complex64::new(1.0, 0.0) - t);
    let nx = grid.dims[0];
    let shift = (0..grid.len())
        .map(|i| {
            let x = grid.point(i)[0];
            let edges = (x == 0) as u32 + (x + 1 == nx) as u32;
            -gamma * inv * edges as f64
        })
        .collect();
    let mut op = Operator::scalar(stencil);
    op.shift = Some(shift);
    op
}

/// Helmholtz equation with a point source at the centre of the unit square,
/// Dirichlet walls at top and bottom and radiation conditions left and right.
/// Multigrid approximates the shifted Laplacian, which preconditions an outer
/// BiCGSTAB iteration.
pub fn helmholtz_2d(k: f64) -> Result<Problem<Complex64>> {
    let l_max = level_for_wavenumber(k)?;
    let depth = default_depth(l_max)?;
    let shift = Complex64::new(1.0, 0.5);
    let levels: Vec<Level<Complex64>> = (0..depth)
        .map(|i| {
            let grid = GridDesc::unit(2, l_max - i as u32);
            let a = helmholtz_operator(&grid, k, Complex64::new(1.0, 0.0));
            let m = helmholtz_operator(&grid, k, shift);
            Level { grid, a, m: Some(m) }
        })
        .collect();
    let grid = &levels[0].grid;
    let h = grid.spacing[0];
    let mid = grid.dims[0] / 2;
    let mut rhs = GridFunction::zeros(grid, 1);
    rhs.values[grid.index([mid, mid, 0])] = Complex64::new(1.0 / (h * h), 0.0);
    Ok(Problem {
        name: "helmholtz2d".into(),
        dim: 2,
        components: 1,
        l_max,
        levels,
        rhs,
        epsilon: if k <= 160.0 { 1e-7 } else { 1e-6 },
        coarse_solver: CoarseSolverKind::Bicgstab,
        restriction: RestrictionKind::FullWeighting,
    })
}
