use crate::{GridDesc, GridError, GridFunction, Result, Scalar, Stencil};

fn check(s_dim: usize, fine: &GridDesc, coarse: &GridDesc) -> Result<()> {
    if s_dim != fine.dim() {
        return Err(GridError::DimMismatch { expected: fine.dim(), found: s_dim });
    }
    if !fine.nests(coarse) {
        return Err(GridError::NonNested { fine: fine.dims.clone(), coarse: coarse.dims.clone() });
    }
    Ok(())
}

/// Evaluate `r` (offsets in fine-grid units) at the fine point coinciding
/// with each coarse point. Coarse index `i` sits on fine index `2i + 1`.
pub fn restrict_apply<T: Scalar>(r: &Stencil<T>, u: &GridFunction<T>, coarse: &GridDesc) -> Result<GridFunction<T>> {
    check(r.dim(), &u.grid, coarse)?;
    let mut out = GridFunction::zeros(coarse, u.components);
    let [fx, fy, fz] = u.grid.dims3();
    let [cx, cy, cz] = coarse.dims3();
    let d = coarse.dim();
    for c in 0..u.components {
        let src = u.component(c);
        let dst = out.component_mut(c);
        for k in 0..cz {
            for j in 0..cy {
                for i in 0..cx {
                    let f = [2 * i + 1, if d > 1 { 2 * j + 1 } else { 0 }, if d > 2 { 2 * k + 1 } else { 0 }];
                    let mut acc = T::zero();
                    for (o, w) in r.entries() {
                        let x = f[0] as i64 + o[0] as i64;
                        let y = f[1] as i64 + o[1] as i64;
                        let z = f[2] as i64 + o[2] as i64;
                        if x >= 0 && y >= 0 && z >= 0 && (x as usize) < fx && (y as usize) < fy && (z as usize) < fz {
                            acc += *w * src[x as usize + fx * (y as usize + fy * z as usize)];
                        }
                    }
                    dst[i + cx * (j + cy * k)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Scatter every coarse value to its fine neighbours: `u_f(x + a) += w u_c(x)`.
pub fn prolong_apply<T: Scalar>(p: &Stencil<T>, u: &GridFunction<T>, fine: &GridDesc) -> Result<GridFunction<T>> {
    check(p.dim(), fine, &u.grid)?;
    let mut out = GridFunction::zeros(fine, u.components);
    let [fx, fy, fz] = fine.dims3();
    let [cx, cy, cz] = u.grid.dims3();
    let d = fine.dim();
    for c in 0..u.components {
        let src = u.component(c);
        let dst = out.component_mut(c);
        for k in 0..cz {
            for j in 0..cy {
                for i in 0..cx {
                    let v = src[i + cx * (j + cy * k)];
                    let f = [2 * i + 1, if d > 1 { 2 * j + 1 } else { 0 }, if d > 2 { 2 * k + 1 } else { 0 }];
                    for (o, w) in p.entries() {
                        let x = f[0] as i64 + o[0] as i64;
                        let y = f[1] as i64 + o[1] as i64;
                        let z = f[2] as i64 + o[2] as i64;
                        if x >= 0 && y >= 0 && z >= 0 && (x as usize) < fx && (y as usize) < fy && (z as usize) < fz {
                            dst[x as usize + fx * (y as usize + fy * z as usize)] += *w * v;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
