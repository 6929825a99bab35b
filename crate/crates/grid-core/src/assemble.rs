//! Dense matrix assembly, the reference oracle for every structured operation.

use nalgebra::DMatrix;

use crate::{Boundary, GridDesc, Operator, Scalar, Stencil, SystemStencil};

fn neighbour(grid: &GridDesc, p: [usize; 3], o: &[i32; 3], boundary: Boundary) -> Option<usize> {
    let d = grid.dims3();
    let mut q = [0usize; 3];
    for k in 0..3 {
        let v = p[k] as i64 + o[k] as i64;
        let n = d[k] as i64;
        q[k] = match boundary {
            Boundary::Dirichlet if v < 0 || v >= n => return None,
            Boundary::Dirichlet => v as usize,
            Boundary::Periodic => v.rem_euclid(n) as usize,
        };
    }
    Some(grid.index(q))
}

fn add_block<T: Scalar>(m: &mut DMatrix<T>, s: &Stencil<T>, grid: &GridDesc, boundary: Boundary, row0: usize, col0: usize) {
    for r in 0..grid.len() {
        let p = grid.point(r);
        for (o, w) in s.entries() {
            if let Some(c) = neighbour(grid, p, o, boundary) {
                m[(row0 + r, col0 + c)] += *w;
            }
        }
    }
}

/// Matrix `M` with `M vec(u) = vec(S u)` in x-fastest ordering.
pub fn assemble_matrix<T: Scalar>(s: &Stencil<T>, grid: &GridDesc, boundary: Boundary) -> DMatrix<T> {
    let n = grid.len();
    let mut m = DMatrix::zeros(n, n);
    add_block(&mut m, s, grid, boundary, 0, 0);
    m
}

/// Component-major block matrix of a system stencil.
pub fn assemble_system<T: Scalar>(s: &SystemStencil<T>, grid: &GridDesc, boundary: Boundary) -> DMatrix<T> {
    let n = grid.len();
    let c = s.components();
    let mut m = DMatrix::zeros(c * n, c * n);
    for i in 0..c {
        for j in 0..c {
            add_block(&mut m, s.get(i, j), grid, boundary, i * n, j * n);
        }
    }
    m
}

/// Dirichlet assembly of an operator including its diagonal shift.
pub fn assemble_operator<T: Scalar>(a: &Operator<T>, grid: &GridDesc) -> DMatrix<T> {
    let mut m = assemble_system(&a.stencil, grid, Boundary::Dirichlet);
    if let Some(shift) = &a.shift {
        for (i, s) in shift.iter().enumerate() {
            m[(i, i)] += *s;
        }
    }
    m
}

fn fine_of(coarse: &GridDesc, p: [usize; 3]) -> [usize; 3] {
    let mut f = [0; 3];
    for k in 0..coarse.dim() {
        f[k] = 2 * p[k] + 1;
    }
    f
}

/// Restriction matrix (coarse × fine) of a single-component transfer stencil.
pub fn assemble_restriction<T: Scalar>(r: &Stencil<T>, fine: &GridDesc, coarse: &GridDesc) -> DMatrix<T> {
    let mut m = DMatrix::zeros(coarse.len(), fine.len());
    for i in 0..coarse.len() {
        let f = fine_of(coarse, coarse.point(i));
        for (o, w) in r.entries() {
            if let Some(j) = neighbour(fine, f, o, Boundary::Dirichlet) {
                m[(i, j)] += *w;
            }
        }
    }
    m
}

/// Prolongation matrix (fine × coarse) of a single-component transfer stencil.
pub fn assemble_prolongation<T: Scalar>(p: &Stencil<T>, coarse: &GridDesc, fine: &GridDesc) -> DMatrix<T> {
    let mut m = DMatrix::zeros(fine.len(), coarse.len());
    for j in 0..coarse.len() {
        let f = fine_of(coarse, coarse.point(j));
        for (o, w) in p.entries() {
            if let Some(i) = neighbour(fine, f, o, Boundary::Dirichlet) {
                m[(i, j)] += *w;
            }
        }
    }
    m
}
