use crate::{GridError, Result, Scalar};

/// Shape of one level of a uniform Cartesian grid (interior points only).
#[derive(Clone, Debug, PartialEq)]
pub struct GridDesc {
    pub dims: Vec<usize>,
    pub spacing: Vec<f64>,
    pub level: i32,
}

impl GridDesc {
    pub fn new(dims: Vec<usize>, spacing: Vec<f64>, level: i32) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 {
            return Err(GridError::UnsupportedDim(dims.len()));
        }
        if spacing.len() != dims.len() {
            return Err(GridError::DimMismatch { expected: dims.len(), found: spacing.len() });
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(GridError::InvalidGrid(format!("zero extent in {dims:?}")));
        }
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(GridError::InvalidGrid(format!("non-positive spacing {spacing:?}")));
        }
        Ok(Self { dims, spacing, level })
    }

    /// Unit-cube Dirichlet grid on level `l`: `2^l - 1` points and spacing `2^-l` per dimension.
    pub fn unit(d: usize, level: u32) -> Self {
        assert!((1..=3).contains(&d) && level >= 1, "unit grid needs 1 <= d <= 3 and level >= 1");
        let n = (1usize << level) - 1;
        let h = 1.0 / (1u64 << level) as f64;
        Self { dims: vec![n; d], spacing: vec![h; d], level: level as i32 }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// Number of grid points.
    #[inline]
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Extents padded to three dimensions with ones.
    #[inline]
    pub fn dims3(&self) -> [usize; 3] {
        let mut out = [1; 3];
        out[..self.dims.len()].copy_from_slice(&self.dims);
        out
    }

    /// Next coarser grid under factor-two vertex coarsening.
    pub fn coarsen(&self) -> Result<GridDesc> {
        if self.dims.iter().any(|&n| n < 3 || n % 2 == 0) {
            return Err(GridError::InvalidGrid(format!("cannot coarsen {:?}", self.dims)));
        }
        Ok(GridDesc {
            dims: self.dims.iter().map(|n| (n - 1) / 2).collect(),
            spacing: self.spacing.iter().map(|h| 2.0 * h).collect(),
            level: self.level - 1,
        })
    }

    pub fn refine(&self) -> GridDesc {
        GridDesc {
            dims: self.dims.iter().map(|n| 2 * n + 1).collect(),
            spacing: self.spacing.iter().map(|h| 0.5 * h).collect(),
            level: self.level + 1,
        }
    }

    /// True if `coarse` is the factor-two coarsening of `self`.
    pub fn nests(&self, coarse: &GridDesc) -> bool {
        self.dim() == coarse.dim() && self.dims.iter().zip(&coarse.dims).all(|(f, c)| *f == 2 * c + 1)
    }

    /// Linear index of a padded point index.
    #[inline]
    pub fn index(&self, p: [usize; 3]) -> usize {
        let d = self.dims3();
        p[0] + d[0] * (p[1] + d[1] * p[2])
    }

    /// Padded point index of a linear index.
    #[inline]
    pub fn point(&self, mut i: usize) -> [usize; 3] {
        let d = self.dims3();
        let x = i % d[0];
        i /= d[0];
        let y = i % d[1];
        [x, y, i / d[1]]
    }

    /// Physical coordinate of the point, boundary at 0 and 1.
    pub fn coord(&self, p: [usize; 3]) -> [f64; 3] {
        let mut c = [0.0; 3];
        for k in 0..self.dim() {
            c[k] = (p[k] + 1) as f64 * self.spacing[k];
        }
        c
    }
}

/// Field values on one grid level, component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    pub grid: GridDesc,
    pub components: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn zeros(grid: &GridDesc, components: usize) -> Self {
        assert!(components >= 1);
        Self { grid: grid.clone(), components, values: vec![T::zero(); components * grid.len()] }
    }

    pub fn from_values(grid: &GridDesc, components: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != components * grid.len() || components == 0 {
            return Err(GridError::InvalidGrid(format!(
                "expected {} values, got {}",
                components * grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid: grid.clone(), components, values })
    }

    /// Fill from `f(component, point)`.
    pub fn from_fn(grid: &GridDesc, components: usize, mut f: impl FnMut(usize, [usize; 3]) -> T) -> Self {
        let n = grid.len();
        let mut values = Vec::with_capacity(components * n);
        for c in 0..components {
            for i in 0..n {
                values.push(f(c, grid.point(i)));
            }
        }
        Self { grid: grid.clone(), components, values }
    }

    #[inline]
    pub fn points(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[T] {
        let n = self.points();
        &self.values[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn component_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.points();
        &mut self.values[c * n..(c + 1) * n]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.grid.dims == other.grid.dims && self.components == other.components
    }

    pub fn fill(&mut self, v: T) {
        self.values.iter_mut().for_each(|x| *x = v);
    }

    /// Euclidean norm over complex magnitudes.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs2()).sum::<f64>().sqrt()
    }

    /// `Σ conj(self_i) other_i`.
    pub fn dot(&self, other: &Self) -> T {
        let mut s = T::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            s += a.conj() * *b;
        }
        s
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: T, x: &Self) {
        for (a, b) in self.values.iter_mut().zip(&x.values) {
            *a += alpha * *b;
        }
    }

    pub fn scale(&mut self, alpha: T) {
        self.values.iter_mut().for_each(|v| *v *= alpha);
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.finite())
    }
}
