use mg_components::{CoarseSolverKind, CoarseSolverSpec, RestrictionKind, SmootherKind, OMEGA_COUNT};
use mg_ir::{generate_program, Coloring, Ir, Op, Program, State};

use crate::{ProblemError, Result};

/// Relaxation index of `ω = 1`, used for every coarse-grid correction.
const UNIT_OMEGA: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    V,
    W,
    /// One F-cycle then one V-cycle on every coarser level.
    F,
}

impl CycleKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "V" => Some(Self::V),
            "W" => Some(Self::W),
            "F" => Some(Self::F),
            _ => None,
        }
    }
}

/// A textbook cycle: `pre` and `post` smoothing steps per level around a
/// recursive coarse-grid correction.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub pre: usize,
    pub post: usize,
    pub smoother: SmootherKind,
    pub coloring: Coloring,
    pub omega_index: usize,
    pub coarse: CoarseSolverSpec,
    pub restriction: RestrictionKind,
}

impl CycleSpec {
    /// Jacobi with ω = 1, CG on the coarsest level and full weighting.
    pub fn new(kind: CycleKind, pre: usize, post: usize) -> Self {
        Self {
            kind,
            pre,
            post,
            smoother: SmootherKind::Jacobi,
            coloring: Coloring::None,
            omega_index: UNIT_OMEGA,
            coarse: CoarseSolverSpec::new(CoarseSolverKind::Cg),
            restriction: RestrictionKind::FullWeighting,
        }
    }

    /// Red-black Gauss-Seidel is pointwise Jacobi on alternating colours.
    pub fn smoother(mut self, kind: SmootherKind, coloring: Coloring) -> Self {
        if kind == SmootherKind::RbGaussSeidel {
            self.smoother = SmootherKind::Jacobi;
            self.coloring = Coloring::RedBlack;
        } else {
            self.smoother = kind;
            self.coloring = coloring;
        }
        self
    }

    pub fn omega_index(mut self, i: usize) -> Self {
        self.omega_index = i;
        self
    }

    pub fn coarse(mut self, spec: CoarseSolverSpec) -> Self {
        self.coarse = spec;
        self
    }

    pub fn restriction(mut self, r: RestrictionKind) -> Self {
        self.restriction = r;
        self
    }
}

struct Builder<'a> {
    ir: Ir,
    spec: &'a CycleSpec,
    depth: usize,
}

impl Builder<'_> {
    fn correction(&mut self, s: State) -> Result<State> {
        if s.c.is_some() {
            Ok(s)
        } else {
            Ok(self.ir.residual(s)?)
        }
    }

    fn smooth(&mut self, s: State) -> Result<State> {
        let s = self.correction(s)?;
        let s = self.ir.apply(Op::Smoother(self.spec.smoother.clone()), s)?;
        Ok(self.ir.update(self.spec.omega_index, self.spec.coloring, s)?)
    }

    fn cycle(&mut self, mut s: State, kind: CycleKind) -> Result<State> {
        for _ in 0..self.spec.pre {
            s = self.smooth(s)?;
        }
        s = self.correction(s)?;
        if s.level + 2 == self.depth {
            s = self.ir.coarse_grid_solver(self.spec.coarse, self.spec.restriction, s)?;
        } else {
            s = self.ir.apply(Op::Restrict(self.spec.restriction), s)?;
            s = self.ir.coarsening(s)?;
            let visits: &[CycleKind] = match kind {
                CycleKind::V => &[CycleKind::V],
                CycleKind::W => &[CycleKind::W, CycleKind::W],
                CycleKind::F => &[CycleKind::F, CycleKind::V],
            };
            for &k in visits {
                s = self.cycle(s, k)?;
            }
            s = self.ir.cgc(s)?;
        }
        s = self.ir.update(UNIT_OMEGA, Coloring::None, s)?;
        for _ in 0..self.spec.post {
            s = self.smooth(s)?;
        }
        Ok(s)
    }
}

/// Expression graph of one cycle over `depth` levels, built through the
/// same state transitions the grammar uses.
pub fn reference_cycle(depth: usize, spec: &CycleSpec) -> Result<(Ir, State)> {
    if depth < 2 {
        return Err(ProblemError::Cycle(format!("need at least two levels, got {depth}")));
    }
    if spec.omega_index >= OMEGA_COUNT {
        return Err(ProblemError::Cycle(format!("relaxation index {}", spec.omega_index)));
    }
    let mut b = Builder { ir: Ir::new(), spec, depth };
    let s = b.ir.initial_state();
    let s = b.cycle(s, spec.kind)?;
    Ok((b.ir, s))
}

pub fn reference_program(depth: usize, spec: &CycleSpec) -> Result<Program> {
    let (ir, s) = reference_cycle(depth, spec)?;
    Ok(generate_program(&ir, &s)?)
}
