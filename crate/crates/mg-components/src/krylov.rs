use grid_core::{GridFunction, Operator, Scalar};

use crate::{ComponentError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoarseSolverKind {
    Cg,
    Bicgstab,
}

/// Stopping rule of a Krylov solve on the coarsest level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoarseSolverSpec {
    pub kind: CoarseSolverKind,
    pub rel_tolerance: f64,
    /// `None` means twice the number of unknowns.
    pub max_iterations: Option<usize>,
}

impl CoarseSolverSpec {
    pub fn new(kind: CoarseSolverKind) -> Self {
        Self { kind, rel_tolerance: 1e-12, max_iterations: None }
    }

    pub fn iteration_cap(&self, unknowns: usize) -> usize {
        self.max_iterations.unwrap_or(2 * unknowns).max(1)
    }

    /// Solve `a x = b` from `x0` with the configured method.
    pub fn solve<T: Scalar>(
        &self,
        a: &Operator<T>,
        b: &GridFunction<T>,
        x0: &GridFunction<T>,
    ) -> Result<(GridFunction<T>, SolveStats)> {
        match self.kind {
            CoarseSolverKind::Cg => cg_solve(a, b, x0, self),
            CoarseSolverKind::Bicgstab => bicgstab_solve(a, b, x0, self),
        }
    }
}

/// Outcome of a Krylov solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub converged: bool,
    /// A recurrence denominator vanished; the best iterate was returned.
    pub breakdown: bool,
    /// Residual norms, starting with the initial one.
    pub residuals: Vec<f64>,
}

impl SolveStats {
    pub fn relative_residual(&self) -> f64 {
        match (self.residuals.first(), self.residuals.last()) {
            (Some(&r0), Some(&r)) if r0 > 0.0 => r / r0,
            _ => 0.0,
        }
    }
}

fn check<T: Scalar>(a: &Operator<T>, b: &GridFunction<T>, x0: &GridFunction<T>) -> Result<()> {
    if !b.same_shape(x0) || b.components != a.components() || b.grid.dim() != a.dim() {
        return Err(ComponentError::ShapeMismatch);
    }
    Ok(())
}

/// Conjugate gradients; the operator must be symmetric positive definite.
pub fn cg_solve<T: Scalar>(
    a: &Operator<T>,
    b: &GridFunction<T>,
    x0: &GridFunction<T>,
    spec: &CoarseSolverSpec,
) -> Result<(GridFunction<T>, SolveStats)> {
    check(a, b, x0)?;
    let mut x = x0.clone();
    let mut r = a.residual(&x, b)?;
    let r0 = r.norm();
    let mut stats = SolveStats { residuals: vec![r0], ..Default::default() };
    if r0 == 0.0 {
        stats.converged = true;
        return Ok((x, stats));
    }
    let cap = spec.iteration_cap(b.values.len());
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    let mut best = (r0, x.clone());
    while stats.iterations < cap {
        let q = a.apply(&p)?;
        let pq = p.dot(&q);
        if pq == T::zero() || !pq.finite() {
            stats.breakdown = true;
            break;
        }
        let alpha = rr / pq;
        x.axpy(alpha, &p);
        r.axpy(-alpha, &q);
        stats.iterations += 1;
        let rn = r.norm();
        stats.residuals.push(rn);
        if rn < best.0 {
            best = (rn, x.clone());
        }
        if rn <= spec.rel_tolerance * r0 {
            stats.converged = true;
            return Ok((x, stats));
        }
        let rr_new = r.dot(&r);
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.values.iter_mut().zip(&r.values) {
            *pi = *ri + beta * *pi;
        }
    }
    Ok((best.1, stats))
}

/// Unpreconditioned BiCGSTAB on an operator.
pub fn bicgstab_solve<T: Scalar>(
    a: &Operator<T>,
    b: &GridFunction<T>,
    x0: &GridFunction<T>,
    spec: &CoarseSolverSpec,
) -> Result<(GridFunction<T>, SolveStats)> {
    check(a, b, x0)?;
    let cap = spec.iteration_cap(b.values.len());
    Ok(bicgstab(
        |v| a.apply(v).expect("shape checked"),
        |v| v.clone(),
        b,
        x0,
        spec.rel_tolerance,
        cap,
    ))
}

/// Right-preconditioned BiCGSTAB with the operator and the preconditioner
/// solve given as closures. Stops once `|r| / |r0| < tol`.
pub fn bicgstab<T: Scalar>(
    mut apply_a: impl FnMut(&GridFunction<T>) -> GridFunction<T>,
    mut precond: impl FnMut(&GridFunction<T>) -> GridFunction<T>,
    b: &GridFunction<T>,
    x0: &GridFunction<T>,
    tol: f64,
    max_iter: usize,
) -> (GridFunction<T>, SolveStats) {
    let mut x = x0.clone();
    let mut r = apply_a(&x);
    for (ri, bi) in r.values.iter_mut().zip(&b.values) {
        *ri = *bi - *ri;
    }
    let r0 = r.norm();
    let mut stats = SolveStats { residuals: vec![r0], ..Default::default() };
    if r0 == 0.0 {
        stats.converged = true;
        return (x, stats);
    }
    let r_hat = r.clone();
    let (mut rho_prev, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut p = GridFunction::zeros(&b.grid, b.components);
    let mut q = p.clone();
    let mut best = (r0, x.clone());
    let fail = |stats: &mut SolveStats, best: (f64, GridFunction<T>)| {
        stats.breakdown = true;
        best.1
    };
    while stats.iterations < max_iter {
        let rho = r_hat.dot(&r);
        if rho == T::zero() || !rho.finite() {
            return (fail(&mut stats, best), stats);
        }
        let beta = (rho / rho_prev) * (alpha / omega);
        for ((pi, ri), qi) in p.values.iter_mut().zip(&r.values).zip(&q.values) {
            *pi = *ri + beta * (*pi - omega * *qi);
        }
        let y = precond(&p);
        q = apply_a(&y);
        let den = r_hat.dot(&q);
        if den == T::zero() || !den.finite() {
            return (fail(&mut stats, best), stats);
        }
        alpha = rho / den;
        let mut h = x.clone();
        h.axpy(alpha, &y);
        let mut s = r.clone();
        s.axpy(-alpha, &q);
        stats.iterations += 1;
        let sn = s.norm();
        if sn / r0 < tol {
            stats.residuals.push(sn);
            stats.converged = true;
            return (h, stats);
        }
        let z = precond(&s);
        let t = apply_a(&z);
        let tt = t.dot(&t);
        if tt == T::zero() || !tt.finite() {
            return (fail(&mut stats, best), stats);
        }
        omega = t.dot(&s) / tt;
        x = h;
        x.axpy(omega, &z);
        r = s;
        r.axpy(-omega, &t);
        let rn = r.norm();
        stats.residuals.push(rn);
        if !rn.is_finite() {
            return (fail(&mut stats, best), stats);
        }
        if rn < best.0 {
            best = (rn, x.clone());
        }
        if rn / r0 < tol {
            stats.converged = true;
            return (x, stats);
        }
        if omega == T::zero() {
            return (fail(&mut stats, best), stats);
        }
        rho_prev = rho;
    }
    (best.1, stats)
}
