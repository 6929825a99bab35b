use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use bench_problems::Problem;
use grid_core::{prolong_apply, restrict_apply, GridDesc, GridFunction, Operator, Scalar, Stencil};
use mg_components::{make_prolongation, make_restriction, Partition, Relaxation, RestrictionKind, SmootherKind};
use mg_ir::{Backend, Op};

use crate::{EvalError, Result};

struct LevelData<T> {
    grid: GridDesc,
    op: Operator<T>,
}

/// Everything a program needs to run on one problem: grids, the operator
/// multigrid approximates on every level, transfer stencils and a cache of
/// smoother inverses. Shareable across threads.
pub struct Hierarchy<T> {
    levels: Vec<LevelData<T>>,
    prolongation: Stencil<T>,
    restrictions: Mutex<HashMap<RestrictionKind, Arc<Stencil<T>>>>,
    relaxations: Mutex<HashMap<(usize, SmootherKind), Arc<Relaxation<T>>>>,
}

impl<T: Scalar> Hierarchy<T> {
    pub fn new(problem: &Problem<T>) -> Result<Self> {
        let levels = problem
            .levels
            .iter()
            .map(|l| LevelData { grid: l.grid.clone(), op: l.mg_operator().clone() })
            .collect();
        Ok(Self {
            levels,
            prolongation: make_prolongation(problem.dim)?,
            restrictions: Mutex::new(HashMap::new()),
            relaxations: Mutex::new(HashMap::new()),
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn grid(&self, level: usize) -> &GridDesc {
        &self.levels[level].grid
    }

    pub fn operator(&self, level: usize) -> &Operator<T> {
        &self.levels[level].op
    }

    fn check(&self, level: usize) -> Result<&LevelData<T>> {
        self.levels.get(level).ok_or(EvalError::Level { level, depth: self.levels.len() })
    }

    fn relaxation(&self, level: usize, kind: &SmootherKind) -> Result<Arc<Relaxation<T>>> {
        let key = (level, kind.clone());
        if let Some(r) = self.relaxations.lock().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let l = self.check(level)?;
        let r = Arc::new(Relaxation::new(&l.op, &l.grid, kind)?);
        self.relaxations.lock().expect("cache lock").insert(key, r.clone());
        Ok(r)
    }

    fn restriction(&self, kind: RestrictionKind) -> Result<Arc<Stencil<T>>> {
        let mut cache = self.restrictions.lock().expect("cache lock");
        if let Some(r) = cache.get(&kind) {
            return Ok(r.clone());
        }
        let r = Arc::new(make_restriction(self.levels[0].grid.dim(), kind)?);
        cache.insert(kind, r.clone());
        Ok(r)
    }

    /// A backend bound to this hierarchy, with its own cost counter.
    pub fn session(&self) -> Session<'_, T> {
        Session { h: self, cost: 0 }
    }
}

/// Executes program operations on a [`Hierarchy`] and counts work in
/// stencil-entry-times-point units.
pub struct Session<'a, T> {
    h: &'a Hierarchy<T>,
    pub cost: u64,
}

impl<T: Scalar> Session<'_, T> {
    fn unknowns(&self, level: usize) -> u64 {
        let l = &self.h.levels[level];
        (l.grid.len() * l.op.components()) as u64
    }
}

impl<T: Scalar> Backend for Session<'_, T> {
    type Value = GridFunction<T>;
    type Error = EvalError;

    fn zero(&mut self, level: usize) -> Result<GridFunction<T>> {
        let l = self.h.check(level)?;
        Ok(GridFunction::zeros(&l.grid, l.op.components()))
    }

    fn residual(&mut self, level: usize, x: &GridFunction<T>, b: &GridFunction<T>) -> Result<GridFunction<T>> {
        let l = self.h.check(level)?;
        self.cost += (l.op.entry_count() * l.grid.len()) as u64;
        Ok(l.op.residual(x, b)?)
    }

    fn apply(&mut self, op: &Op, level: usize, v: &GridFunction<T>) -> Result<GridFunction<T>> {
        let l = self.h.check(level)?;
        match op {
            Op::Smoother(kind) => {
                let r = self.h.relaxation(level, kind)?;
                self.cost += self.unknowns(level) * l.op.components() as u64;
                Ok(r.apply(v))
            }
            Op::Restrict(kind) => {
                let coarse = self.h.check(level + 1)?;
                let r = self.h.restriction(*kind)?;
                self.cost += (r.len() * coarse.grid.len() * v.components) as u64;
                Ok(restrict_apply(&r, v, &coarse.grid)?)
            }
            Op::Prolong => {
                let fine = level.checked_sub(1).map(|f| self.h.check(f)).transpose()?;
                let fine = fine.ok_or(mg_ir::IrError::ProlongFromFinest)?;
                self.cost += (self.h.prolongation.len() * l.grid.len() * v.components) as u64;
                Ok(prolong_apply(&self.h.prolongation, v, &fine.grid)?)
            }
            Op::CoarseSolve(spec) => {
                let x0 = GridFunction::zeros(&l.grid, v.components);
                let (x, stats) = spec.solve(&l.op, v, &x0)?;
                let per = (l.op.entry_count() + 6 * l.op.components()) * l.grid.len();
                self.cost += (stats.iterations.max(1) * per) as u64;
                Ok(x)
            }
        }
    }

    fn update(
        &mut self,
        level: usize,
        x: &GridFunction<T>,
        c: &GridFunction<T>,
        omega: f64,
        part: Partition,
        component: Option<usize>,
    ) -> Result<GridFunction<T>> {
        let l = self.h.check(level)?;
        self.cost += self.unknowns(level);
        let w = T::from_re(omega);
        let mut out = x.clone();
        if part == Partition::All && component.is_none() {
            out.axpy(w, c);
        } else {
            let n = l.grid.len();
            let d = l.grid.dim();
            let comps = match component {
                Some(k) => k..k + 1,
                None => 0..x.components,
            };
            for p in (0..n).filter(|&p| part.contains(l.grid.point(p), d)) {
                for comp in comps.clone() {
                    let k = comp * n + p;
                    out.values[k] += w * c.values[k];
                }
            }
        }
        Ok(out)
    }

    fn components(&self, level: usize) -> usize {
        self.h.levels.get(level).map_or(1, |l| l.op.components())
    }
}
