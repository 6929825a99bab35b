use std::collections::HashMap;
use std::sync::Arc;

use grid_core::{GridDesc, GridFunction, Operator, Scalar};
use nalgebra::DMatrix;

use crate::{ComponentError, Result};

/// Size of the relaxation-factor table.
pub const OMEGA_COUNT: usize = 37;

/// Relaxation factor for a table index: `0.1 + 0.05 i`.
pub fn omega(index: usize) -> f64 {
    assert!(index < OMEGA_COUNT, "relaxation index {index} out of range");
    // exact for the decimal table entries
    (10.0 + 5.0 * index as f64) / 100.0
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmootherKind {
    /// Pointwise Jacobi; for systems this inverts each component's own diagonal (decoupled).
    Jacobi,
    /// Jacobi on the pointwise `components x components` block.
    Collective,
    RbGaussSeidel,
    /// Non-overlapping rectangular blocks with the given extents per dimension.
    Block(Vec<usize>),
}

impl SmootherKind {
    pub fn name(&self) -> String {
        match self {
            SmootherKind::Jacobi => "jacobi".into(),
            SmootherKind::Collective => "collective".into(),
            SmootherKind::RbGaussSeidel => "rbgs".into(),
            SmootherKind::Block(s) => {
                format!("block{}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("x"))
            }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "jacobi" => Some(Self::Jacobi),
            "collective" => Some(Self::Collective),
            "rbgs" => Some(Self::RbGaussSeidel),
            _ => {
                let dims = s.strip_prefix("block")?;
                let v: Option<Vec<usize>> = dims.split('x').map(|t| t.parse().ok()).collect();
                let v = v?;
                (!v.is_empty() && v.iter().all(|&e| e >= 1)).then_some(Self::Block(v))
            }
        }
    }
}

/// A smoother together with its relaxation factor index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmootherSpec {
    pub kind: SmootherKind,
    pub relaxation_index: usize,
}

impl SmootherSpec {
    pub fn new(kind: SmootherKind, relaxation_index: usize) -> Result<Self> {
        if relaxation_index >= OMEGA_COUNT {
            return Err(ComponentError::InvalidSmoother(format!("relaxation index {relaxation_index}")));
        }
        if let SmootherKind::Block(s) = &kind {
            let terms: usize = s.iter().product();
            if s.is_empty() || s.contains(&0) || terms > 6 {
                return Err(ComponentError::InvalidSmoother(format!("block shape {s:?}")));
            }
        }
        Ok(Self { kind, relaxation_index })
    }

    pub fn omega(&self) -> f64 {
        omega(self.relaxation_index)
    }
}

/// All rectangular block shapes in `d` dimensions with 2 to `max_terms` points.
pub fn block_shapes(d: usize, max_terms: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![1; d];
    fn rec(k: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            let p: usize = cur.iter().product();
            if p >= 2 && p <= max {
                out.push(cur.clone());
            }
            return;
        }
        for e in 1..=max {
            cur[k] = e;
            if cur[..=k].iter().product::<usize>() > max {
                break;
            }
            rec(k + 1, cur, max, out);
        }
        cur[k] = 1;
    }
    rec(0, &mut cur, max_terms, &mut out);
    out
}

/// Which points an update touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Partition {
    All,
    Red,
    Black,
}

impl Partition {
    /// Whether padded point `p` of a `d`-dimensional grid belongs to this partition.
    #[inline]
    pub fn contains(self, p: [usize; 3], d: usize) -> bool {
        in_part(p, d, self)
    }
}

/// Red points have an even sum of one-based interior indices.
#[inline]
fn is_red(p: [usize; 3], d: usize) -> bool {
    (p[..d].iter().sum::<usize>() + d) % 2 == 0
}

/// Precomputed inverse of the smoother's splitting matrix on one level.
#[derive(Clone, Debug)]
pub enum Relaxation<T> {
    /// Inverse diagonal per unknown, component-major.
    Pointwise(Vec<T>),
    /// Inverse pointwise block per point, `c*c` row-major each.
    Collective { components: usize, inv: Vec<T> },
    Block { shape: [usize; 3], blocks: Vec<LocalBlock<T>> },
}

#[derive(Clone, Debug)]
pub struct LocalBlock<T> {
    origin: [usize; 3],
    extent: [usize; 3],
    /// Row-major inverse over (component, point-in-block) unknowns.
    inv: Arc<Vec<T>>,
}

fn check_shapes<T: Scalar>(a: &Operator<T>, x: &GridFunction<T>, b: &GridFunction<T>) -> Result<()> {
    if !x.same_shape(b) || x.components != a.components() || x.grid.dim() != a.dim() {
        return Err(ComponentError::ShapeMismatch);
    }
    Ok(())
}

impl<T: Scalar> Relaxation<T> {
    /// Prepare the inverse for `kind` on `grid`. Red-black Gauss-Seidel uses the pointwise inverse.
    pub fn new(a: &Operator<T>, grid: &GridDesc, kind: &SmootherKind) -> Result<Self> {
        let n = grid.len();
        let c = a.components();
        match kind {
            SmootherKind::Jacobi | SmootherKind::RbGaussSeidel => {
                let mut inv = Vec::with_capacity(c * n);
                for comp in 0..c {
                    for p in 0..n {
                        let d = a.diag_at(comp, p, n);
                        if d == T::zero() || !d.finite() {
                            return Err(ComponentError::ZeroDiagonal(comp * n + p));
                        }
                        inv.push(T::one() / d);
                    }
                }
                Ok(Relaxation::Pointwise(inv))
            }
            SmootherKind::Collective => {
                let mut inv = Vec::with_capacity(c * c * n);
                let mut cache: Option<Vec<T>> = None;
                for p in 0..n {
                    if a.shift.is_none() {
                        if let Some(m) = &cache {
                            inv.extend_from_slice(m);
                            continue;
                        }
                    }
                    let m = DMatrix::from_fn(c, c, |i, j| a.coupling_at(i, j, p, n));
                    let mi = m.try_inverse().ok_or(ComponentError::SingularBlock(grid.point(p)))?;
                    let flat: Vec<T> = (0..c).flat_map(|i| (0..c).map(move |j| (i, j))).map(|ij| mi[ij]).collect();
                    inv.extend_from_slice(&flat);
                    cache = Some(flat);
                }
                Ok(Relaxation::Collective { components: c, inv })
            }
            SmootherKind::Block(shape) => {
                if shape.len() != grid.dim() || shape.contains(&0) {
                    return Err(ComponentError::InvalidSmoother(format!("block shape {shape:?}")));
                }
                Self::blocks(a, grid, shape)
            }
        }
    }

    fn blocks(a: &Operator<T>, grid: &GridDesc, shape: &[usize]) -> Result<Self> {
        let dims = grid.dims3();
        let mut sh = [1; 3];
        sh[..shape.len()].copy_from_slice(shape);
        let n = grid.len();
        let c = a.components();
        let mut cache: HashMap<Vec<u64>, Arc<Vec<T>>> = HashMap::new();
        let mut blocks = Vec::new();
        for bz in (0..dims[2]).step_by(sh[2]) {
            for by in (0..dims[1]).step_by(sh[1]) {
                for bx in (0..dims[0]).step_by(sh[0]) {
                    let origin = [bx, by, bz];
                    let extent = [sh[0].min(dims[0] - bx), sh[1].min(dims[1] - by), sh[2].min(dims[2] - bz)];
                    let pts: Vec<usize> = block_points(origin, extent).map(|q| grid.index(q)).collect();
                    let mut key: Vec<u64> = extent.iter().map(|&e| e as u64).collect();
                    if let Some(s) = &a.shift {
                        for comp in 0..c {
                            for &p in &pts {
                                let v = s[comp * n + p];
                                key.push(v.re().to_bits());
                                key.push(v.im().to_bits());
                            }
                        }
                    }
                    let inv = match cache.get(&key) {
                        Some(m) => m.clone(),
                        None => {
                            let m = local_matrix(a, grid, origin, extent);
                            let mi = m.try_inverse().ok_or(ComponentError::SingularBlock(origin))?;
                            let k = mi.nrows();
                            let flat = Arc::new((0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|ij| mi[ij]).collect());
                            cache.insert(key, Arc::clone(&flat));
                            flat
                        }
                    };
                    blocks.push(LocalBlock { origin, extent, inv });
                }
            }
        }
        Ok(Relaxation::Block { shape: sh, blocks })
    }

    /// `B r`, the smoother's approximate inverse applied to a residual.
    pub fn apply(&self, r: &GridFunction<T>) -> GridFunction<T> {
        let mut out = GridFunction::zeros(&r.grid, r.components);
        self.apply_into(r, &mut out, Partition::All);
        out
    }

    /// Writes `B r` into `out` at the unknowns of `part`; other entries are left untouched.
    pub fn apply_into(&self, r: &GridFunction<T>, out: &mut GridFunction<T>, part: Partition) {
        let n = r.points();
        let d = r.grid.dim();
        match self {
            Relaxation::Pointwise(inv) => {
                if part == Partition::All {
                    for ((o, v), i) in out.values.iter_mut().zip(&r.values).zip(inv) {
                        *o = *v * *i;
                    }
                } else {
                    for comp in 0..r.components {
                        for p in 0..n {
                            if in_part(r.grid.point(p), d, part) {
                                let k = comp * n + p;
                                out.values[k] = r.values[k] * inv[k];
                            }
                        }
                    }
                }
            }
            Relaxation::Collective { components: c, inv } => {
                let c = *c;
                let mut buf = vec![T::zero(); c];
                for p in 0..n {
                    if !in_part(r.grid.point(p), d, part) {
                        continue;
                    }
                    let m = &inv[p * c * c..(p + 1) * c * c];
                    for (i, b) in buf.iter_mut().enumerate() {
                        let mut acc = T::zero();
                        for j in 0..c {
                            acc += m[i * c + j] * r.values[j * n + p];
                        }
                        *b = acc;
                    }
                    for (i, b) in buf.iter().enumerate() {
                        out.values[i * n + p] = *b;
                    }
                }
            }
            Relaxation::Block { shape, blocks } => {
                let c = r.components;
                let mut rb = Vec::new();
                for blk in blocks {
                    let bidx = [blk.origin[0] / shape[0], blk.origin[1] / shape[1], blk.origin[2] / shape[2]];
                    if !in_part(bidx, d, part) {
                        continue;
                    }
                    let pts: Vec<usize> = block_points(blk.origin, blk.extent).map(|q| r.grid.index(q)).collect();
                    rb.clear();
                    for comp in 0..c {
                        rb.extend(pts.iter().map(|&p| r.values[comp * n + p]));
                    }
                    let k = rb.len();
                    for row in 0..k {
                        let m = &blk.inv[row * k..(row + 1) * k];
                        let mut acc = T::zero();
                        for (a, b) in m.iter().zip(&rb) {
                            acc += *a * *b;
                        }
                        let (comp, i) = (row / pts.len(), row % pts.len());
                        out.values[comp * n + pts[i]] = acc;
                    }
                }
            }
        }
    }

    /// One relaxation step restricted to `part`: `x += omega B (b - A x)` there.
    pub fn sweep(
        &self,
        a: &Operator<T>,
        x: &mut GridFunction<T>,
        b: &GridFunction<T>,
        omega: f64,
        part: Partition,
    ) -> Result<()> {
        check_shapes(a, x, b)?;
        let r = a.residual(x, b)?;
        let mut c = GridFunction::zeros(&r.grid, r.components);
        self.apply_into(&r, &mut c, part);
        // entries outside the partition stay zero
        x.axpy(T::from_re(omega), &c);
        Ok(())
    }
}

fn in_part(p: [usize; 3], d: usize, part: Partition) -> bool {
    match part {
        Partition::All => true,
        Partition::Red => is_red(p, d),
        Partition::Black => !is_red(p, d),
    }
}

fn block_points(origin: [usize; 3], extent: [usize; 3]) -> impl Iterator<Item = [usize; 3]> {
    (0..extent[2]).flat_map(move |k| {
        (0..extent[1]).flat_map(move |j| (0..extent[0]).map(move |i| [origin[0] + i, origin[1] + j, origin[2] + k]))
    })
}

/// Restriction of `a` to the unknowns of one block (component-major inside the block).
fn local_matrix<T: Scalar>(a: &Operator<T>, grid: &GridDesc, origin: [usize; 3], extent: [usize; 3]) -> DMatrix<T> {
    let pts: Vec<[usize; 3]> = block_points(origin, extent).collect();
    let m = pts.len();
    let c = a.components();
    let n = grid.len();
    let local = |q: [i64; 3]| -> Option<usize> {
        let rel: Vec<i64> = (0..3).map(|k| q[k] - origin[k] as i64).collect();
        if (0..3).all(|k| rel[k] >= 0 && rel[k] < extent[k] as i64) {
            Some(rel[0] as usize + extent[0] * (rel[1] as usize + extent[1] * rel[2] as usize))
        } else {
            None
        }
    };
    let mut mat = DMatrix::zeros(c * m, c * m);
    for (ip, p) in pts.iter().enumerate() {
        for ci in 0..c {
            for cj in 0..c {
                for (o, w) in a.stencil.get(ci, cj).entries() {
                    let q = [p[0] as i64 + o[0] as i64, p[1] as i64 + o[1] as i64, p[2] as i64 + o[2] as i64];
                    if let Some(jq) = local(q) {
                        mat[(ci * m + ip, cj * m + jq)] += *w;
                    }
                }
            }
            if let Some(s) = &a.shift {
                mat[(ci * m + ip, ci * m + ip)] += s[ci * n + grid.index(*p)];
            }
        }
    }
    mat
}

/// Weighted Jacobi with per-component diagonals, optionally on one colour only.
pub fn smooth_jacobi<T: Scalar>(
    a: &Operator<T>,
    x: &GridFunction<T>,
    b: &GridFunction<T>,
    omega: f64,
    part: Partition,
) -> Result<GridFunction<T>> {
    let relax = Relaxation::new(a, &x.grid, &SmootherKind::Jacobi)?;
    let mut out = x.clone();
    relax.sweep(a, &mut out, b, omega, part)?;
    Ok(out)
}

/// Weighted Jacobi solving the pointwise component block.
pub fn smooth_jacobi_collective<T: Scalar>(
    a: &Operator<T>,
    x: &GridFunction<T>,
    b: &GridFunction<T>,
    omega: f64,
    part: Partition,
) -> Result<GridFunction<T>> {
    let relax = Relaxation::new(a, &x.grid, &SmootherKind::Collective)?;
    let mut out = x.clone();
    relax.sweep(a, &mut out, b, omega, part)?;
    Ok(out)
}

/// Red half-sweep followed by a black half-sweep on the updated values.
pub fn smooth_rbgs<T: Scalar>(
    a: &Operator<T>,
    x: &GridFunction<T>,
    b: &GridFunction<T>,
    omega: f64,
) -> Result<GridFunction<T>> {
    let relax = Relaxation::new(a, &x.grid, &SmootherKind::RbGaussSeidel)?;
    let mut out = x.clone();
    relax.sweep(a, &mut out, b, omega, Partition::Red)?;
    relax.sweep(a, &mut out, b, omega, Partition::Black)?;
    Ok(out)
}

/// Block Jacobi: every block solves its local system against the same input residual.
pub fn smooth_block_jacobi<T: Scalar>(
    a: &Operator<T>,
    x: &GridFunction<T>,
    b: &GridFunction<T>,
    omega: f64,
    block_shape: &[usize],
) -> Result<GridFunction<T>> {
    let relax = Relaxation::new(a, &x.grid, &SmootherKind::Block(block_shape.to_vec()))?;
    let mut out = x.clone();
    relax.sweep(a, &mut out, b, omega, Partition::All)?;
    Ok(out)
}
