use crate::{apply_add, Boundary, GridError, GridFunction, Result, Scalar, Stencil};

/// Block operator for PDE systems: entry `(i, j)` couples component `j` into equation `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemStencil<T> {
    block: Vec<Vec<Stencil<T>>>,
}

impl<T: Scalar> SystemStencil<T> {
    pub fn new(block: Vec<Vec<Stencil<T>>>) -> Result<Self> {
        let c = block.len();
        if c == 0 {
            return Err(GridError::InvalidGrid("empty block operator".into()));
        }
        let d = block[0].first().map(|s| s.dim()).unwrap_or(0);
        for row in &block {
            if row.len() != c {
                return Err(GridError::ComponentMismatch { expected: c, found: row.len() });
            }
            for s in row {
                if s.dim() != d {
                    return Err(GridError::DimMismatch { expected: d, found: s.dim() });
                }
            }
        }
        Ok(Self { block })
    }

    pub fn scalar(s: Stencil<T>) -> Self {
        Self { block: vec![vec![s]] }
    }

    #[inline]
    pub fn components(&self) -> usize {
        self.block.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.block[0][0].dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Stencil<T> {
        &self.block[i][j]
    }

    pub fn map(&self, f: impl Fn(&Stencil<T>) -> Stencil<T>) -> Self {
        Self { block: self.block.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    /// Component `i` of the result sums `block[i][j]` applied to component `j`.
    pub fn apply(&self, u: &GridFunction<T>, boundary: Boundary) -> Result<GridFunction<T>> {
        self.check(u)?;
        let mut out = GridFunction::zeros(&u.grid, u.components);
        let dims = u.grid.dims3();
        for i in 0..self.components() {
            for j in 0..self.components() {
                apply_add(&self.block[i][j], u.component(j), out.component_mut(i), dims, boundary);
            }
        }
        Ok(out)
    }

    fn check(&self, u: &GridFunction<T>) -> Result<()> {
        if self.dim() != u.grid.dim() {
            return Err(GridError::DimMismatch { expected: u.grid.dim(), found: self.dim() });
        }
        if self.components() != u.components {
            return Err(GridError::ComponentMismatch { expected: self.components(), found: u.components });
        }
        Ok(())
    }
}

/// Discrete operator on one level: a constant-coefficient block stencil plus
/// an optional point-dependent diagonal shift (used where boundary closures
/// modify the rows next to the boundary).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    pub stencil: SystemStencil<T>,
    /// Component-major, one value per unknown.
    pub shift: Option<Vec<T>>,
}

impl<T: Scalar> Operator<T> {
    pub fn new(stencil: SystemStencil<T>) -> Self {
        Self { stencil, shift: None }
    }

    pub fn scalar(s: Stencil<T>) -> Self {
        Self::new(SystemStencil::scalar(s))
    }

    #[inline]
    pub fn components(&self) -> usize {
        self.stencil.components()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.stencil.dim()
    }

    /// Total stencil entries over all blocks, a cost proxy per grid point.
    pub fn entry_count(&self) -> usize {
        let c = self.components();
        (0..c).flat_map(|i| (0..c).map(move |j| (i, j))).map(|(i, j)| self.stencil.get(i, j).len()).sum()
    }

    /// `A u` with zero exterior.
    pub fn apply(&self, u: &GridFunction<T>) -> Result<GridFunction<T>> {
        let mut out = self.stencil.apply(u, Boundary::Dirichlet)?;
        if let Some(shift) = &self.shift {
            for ((o, s), v) in out.values.iter_mut().zip(shift).zip(&u.values) {
                *o += *s * *v;
            }
        }
        Ok(out)
    }

    /// `b - A x`
    pub fn residual(&self, x: &GridFunction<T>, b: &GridFunction<T>) -> Result<GridFunction<T>> {
        let mut r = self.apply(x)?;
        for (ri, bi) in r.values.iter_mut().zip(&b.values) {
            *ri = *bi - *ri;
        }
        Ok(r)
    }

    /// Diagonal coefficient of component `c` at linear point `p`.
    #[inline]
    pub fn diag_at(&self, c: usize, p: usize, points: usize) -> T {
        self.coupling_at(c, c, p, points)
    }

    /// Zero-offset coefficient of block `(i, j)` at point `p`, including the shift on the diagonal.
    pub fn coupling_at(&self, i: usize, j: usize, p: usize, points: usize) -> T {
        let base = self.stencil.get(i, j).center();
        match (&self.shift, i == j) {
            (Some(s), true) => base + s[i * points + p],
            _ => base,
        }
    }
}
