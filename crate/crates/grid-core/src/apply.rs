use crate::{GridError, GridFunction, Result, Scalar, Stencil};

/// How reads outside the interior are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Exterior values are zero (Dirichlet data lives in the right-hand side).
    Dirichlet,
    Periodic,
}

/// `dst += S src` for one component on a grid of extents `dims`.
pub fn apply_add<T: Scalar>(s: &Stencil<T>, src: &[T], dst: &mut [T], dims: [usize; 3], boundary: Boundary) {
    debug_assert_eq!(src.len(), dims.iter().product::<usize>());
    debug_assert_eq!(dst.len(), src.len());
    match boundary {
        Boundary::Dirichlet => apply_dirichlet(s, src, dst, dims),
        Boundary::Periodic => apply_periodic(s, src, dst, dims),
    }
}

fn apply_dirichlet<T: Scalar>(s: &Stencil<T>, src: &[T], dst: &mut [T], [nx, ny, nz]: [usize; 3]) {
    let range = |a: i32, n: usize| -> (usize, usize) {
        let lo = (-a).max(0) as usize;
        let hi = (n as i64 - a as i64).clamp(0, n as i64) as usize;
        (lo.min(hi), hi)
    };
    for (o, w) in s.entries() {
        let w = *w;
        let (x0, x1) = range(o[0], nx);
        let (y0, y1) = range(o[1], ny);
        let (z0, z1) = range(o[2], nz);
        if x0 >= x1 {
            continue;
        }
        let shift = o[0] as isize + nx as isize * (o[1] as isize + ny as isize * o[2] as isize);
        for z in z0..z1 {
            for y in y0..y1 {
                let row = nx * (y + ny * z);
                let d = &mut dst[row + x0..row + x1];
                let start = (row as isize + x0 as isize + shift) as usize;
                let sv = &src[start..start + (x1 - x0)];
                for (a, b) in d.iter_mut().zip(sv) {
                    *a += w * *b;
                }
            }
        }
    }
}

fn apply_periodic<T: Scalar>(s: &Stencil<T>, src: &[T], dst: &mut [T], [nx, ny, nz]: [usize; 3]) {
    let wrap = |i: usize, a: i32, n: usize| -> usize { (i as i64 + a as i64).rem_euclid(n as i64) as usize };
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let mut acc = T::zero();
                for (o, w) in s.entries() {
                    let q = wrap(x, o[0], nx) + nx * (wrap(y, o[1], ny) + ny * wrap(z, o[2], nz));
                    acc += *w * src[q];
                }
                dst[x + nx * (y + ny * z)] += acc;
            }
        }
    }
}

/// Apply `s` to every component of `u`.
pub fn stencil_apply<T: Scalar>(s: &Stencil<T>, u: &GridFunction<T>, boundary: Boundary) -> Result<GridFunction<T>> {
    if s.dim() != u.grid.dim() {
        return Err(GridError::DimMismatch { expected: u.grid.dim(), found: s.dim() });
    }
    let mut out = GridFunction::zeros(&u.grid, u.components);
    let dims = u.grid.dims3();
    for c in 0..u.components {
        apply_add(s, u.component(c), out.component_mut(c), dims, boundary);
    }
    Ok(out)
}
