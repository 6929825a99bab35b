use grid_core::{GridDesc, GridFunction, Operator, Scalar, SystemStencil};
use mg_components::{CoarseSolverKind, CoarseSolverSpec, RestrictionKind};

use crate::{ProblemError, Result};

/// One discretization level. `m` is the preconditioning operator, if the
/// problem has one; multigrid then works on `m` instead of `a`.
#[derive(Clone, Debug)]
pub struct Level<T> {
    pub grid: GridDesc,
    pub a: Operator<T>,
    pub m: Option<Operator<T>>,
}

impl<T: Scalar> Level<T> {
    /// Operator the multigrid hierarchy approximates on this level.
    pub fn mg_operator(&self) -> &Operator<T> {
        self.m.as_ref().unwrap_or(&self.a)
    }
}

/// A discretized boundary value problem on a hierarchy of grids.
/// Index 0 of `levels` is the finest grid.
#[derive(Clone, Debug)]
pub struct Problem<T> {
    pub name: String,
    pub dim: usize,
    pub components: usize,
    pub l_max: u32,
    pub levels: Vec<Level<T>>,
    /// Right-hand side on the finest grid, boundary data folded in.
    pub rhs: GridFunction<T>,
    /// Target reduction of the residual norm.
    pub epsilon: f64,
    pub coarse_solver: CoarseSolverKind,
    pub restriction: RestrictionKind,
}

impl<T: Scalar> Problem<T> {
    pub fn l_min(&self) -> u32 {
        self.l_max + 1 - self.levels.len() as u32
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn unknowns(&self) -> usize {
        self.components * self.levels[0].grid.len()
    }

    pub fn is_complex(&self) -> bool {
        T::IS_COMPLEX
    }

    /// True when the hierarchy is a preconditioner for an outer Krylov method.
    pub fn is_preconditioned(&self) -> bool {
        self.levels[0].m.is_some()
    }

    pub fn finest(&self) -> &Level<T> {
        &self.levels[0]
    }

    /// Coarse solver with the default stopping rule.
    pub fn coarse_spec(&self) -> CoarseSolverSpec {
        CoarseSolverSpec::new(self.coarse_solver)
    }

    /// Keep only the `depth` finest levels.
    pub fn truncate(mut self, depth: usize) -> Result<Self> {
        if depth < 2 || depth > self.levels.len() {
            return Err(ProblemError::Levels(format!("depth {depth} with {} levels available", self.levels.len())));
        }
        self.levels.truncate(depth);
        Ok(self)
    }
}

/// Number of levels below `l_max` that still have interior points, capped at five.
pub(crate) fn default_depth(l_max: u32) -> Result<usize> {
    if l_max < 2 {
        return Err(ProblemError::Levels(format!("l_max = {l_max}, need at least 2")));
    }
    Ok((l_max as usize).min(5))
}

/// `(A_ext g)` restricted to the interior: the coupling of every interior
/// point to boundary values `g(component, coordinate)` one stencil reach away.
pub fn boundary_contribution<T: Scalar>(
    stencil: &SystemStencil<T>,
    grid: &GridDesc,
    g: impl Fn(usize, [f64; 3]) -> T,
) -> GridFunction<T> {
    let c = stencil.components();
    let d = grid.dim();
    let dims = grid.dims3();
    let mut out = GridFunction::zeros(grid, c);
    let n = grid.len();
    for lin in 0..n {
        let p = grid.point(lin);
        for i in 0..c {
            let mut acc = T::zero();
            for j in 0..c {
                for (o, w) in stencil.get(i, j).entries() {
                    let q: Vec<i64> = (0..d).map(|k| p[k] as i64 + o[k] as i64).collect();
                    if q.iter().zip(&dims).all(|(&qk, &nk)| qk >= 0 && qk < nk as i64) {
                        continue;
                    }
                    let mut x = [0.0; 3];
                    for k in 0..d {
                        x[k] = (q[k] + 1) as f64 * grid.spacing[k];
                    }
                    acc += *w * g(j, x);
                }
            }
            out.values[i * n + lin] = acc;
        }
    }
    out
}

/// `f_h - (A_ext g)` on the interior.
pub fn rhs_with_boundary<T: Scalar>(
    stencil: &SystemStencil<T>,
    grid: &GridDesc,
    f: impl Fn(usize, [f64; 3]) -> T,
    g: impl Fn(usize, [f64; 3]) -> T,
) -> GridFunction<T> {
    let mut b = boundary_contribution(stencil, grid, g);
    let n = grid.len();
    for (idx, v) in b.values.iter_mut().enumerate() {
        let x = grid.coord(grid.point(idx % n));
        *v = f(idx / n, x) - *v;
    }
    b
}
