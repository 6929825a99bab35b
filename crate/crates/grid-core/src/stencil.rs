use std::cmp::Ordering;

use crate::{GridError, Result, Scalar};

/// Offset vector padded to three dimensions; unused trailing entries are zero.
pub type Offset = [i32; 3];

/// Lexicographic comparison consistent with x-fastest point ordering:
/// the slowest dimension is the most significant one.
pub fn lex_cmp(a: &Offset, b: &Offset) -> Ordering {
    (a[2], a[1], a[0]).cmp(&(b[2], b[1], b[0]))
}

/// A finite set of `(offset, weight)` pairs with pairwise distinct offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil<T> {
    dim: usize,
    entries: Vec<(Offset, T)>,
}

fn pad(dim: usize, off: &[i32]) -> Result<Offset> {
    if off.len() != dim {
        return Err(GridError::DimMismatch { expected: dim, found: off.len() });
    }
    let mut o = [0; 3];
    o[..dim].copy_from_slice(off);
    Ok(o)
}

impl<T: Scalar> Stencil<T> {
    /// Build from offsets of length `dim`. Duplicate offsets are rejected.
    pub fn new<'a>(dim: usize, entries: impl IntoIterator<Item = (&'a [i32], T)>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(GridError::UnsupportedDim(dim));
        }
        let mut out: Vec<(Offset, T)> = Vec::new();
        for (off, w) in entries {
            let o = pad(dim, off)?;
            if out.iter().any(|(p, _)| *p == o) {
                return Err(GridError::DuplicateOffset(off.to_vec()));
            }
            out.push((o, w));
        }
        Ok(Self { dim, entries: out })
    }

    /// Build from padded offsets; entries at equal offsets are summed.
    pub fn from_padded(dim: usize, entries: impl IntoIterator<Item = (Offset, T)>) -> Self {
        assert!((1..=3).contains(&dim));
        let mut s = Self { dim, entries: Vec::new() };
        for (o, w) in entries {
            debug_assert!(o[dim..].iter().all(|&v| v == 0));
            s.accumulate(o, w);
        }
        s
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    /// `{(0, 1)}`
    pub fn identity(dim: usize) -> Self {
        Self { dim, entries: vec![([0; 3], T::one())] }
    }

    /// Tensor product of 1D weight rows centred at zero, one row per dimension.
    pub fn tensor(rows: &[&[f64]], scale: f64) -> Self {
        let dim = rows.len();
        assert!((1..=3).contains(&dim));
        let mut entries = Vec::new();
        let r = |k: usize| -> &[f64] { rows.get(k).copied().unwrap_or(&[1.0]) };
        let half = |k: usize| (r(k).len() / 2) as i32;
        for (k, wz) in r(2).iter().enumerate() {
            for (j, wy) in r(1).iter().enumerate() {
                for (i, wx) in r(0).iter().enumerate() {
                    let w = wx * wy * wz * scale;
                    if w != 0.0 {
                        entries.push(([i as i32 - half(0), j as i32 - half(1), k as i32 - half(2)], T::from_re(w)));
                    }
                }
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[(Offset, T)] {
        &self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self, off: &[i32]) -> Option<T> {
        let o = pad(self.dim, off).ok()?;
        self.entries.iter().find(|(p, _)| *p == o).map(|(_, w)| *w)
    }

    /// Weight at the zero offset, zero when absent.
    #[inline]
    pub fn center(&self) -> T {
        self.entries.iter().find(|(o, _)| *o == [0; 3]).map(|(_, w)| *w).unwrap_or_else(T::zero)
    }

    /// Largest absolute offset per padded dimension.
    pub fn reach(&self) -> [i32; 3] {
        let mut r = [0; 3];
        for (o, _) in &self.entries {
            for k in 0..3 {
                r[k] = r[k].max(o[k].abs());
            }
        }
        r
    }

    fn accumulate(&mut self, o: Offset, w: T) {
        match self.entries.iter_mut().find(|(p, _)| *p == o) {
            Some((_, v)) => *v += w,
            None => self.entries.push((o, w)),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(GridError::DimMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Merge entries, summing weights at shared offsets.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (o, w) in &other.entries {
            out.accumulate(*o, *w);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (o, w) in &other.entries {
            out.accumulate(*o, -*w);
        }
        Ok(out)
    }

    /// Composition: all offset sums with weight products.
    pub fn mult(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::empty(self.dim);
        for (a, wa) in &self.entries {
            for (b, wb) in &other.entries {
                out.accumulate([a[0] + b[0], a[1] + b[1], a[2] + b[2]], *wa * *wb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|(o, w)| (*o, alpha * *w)).collect() }
    }

    /// Zero-offset entry, or `{(0, 0)}` when absent.
    pub fn diag(&self) -> Self {
        let w = self.entries.iter().find(|(o, _)| *o == [0; 3]).map(|(_, w)| *w).unwrap_or_else(T::zero);
        Self { dim: self.dim, entries: vec![([0; 3], w)] }
    }

    pub fn diag_inv(&self) -> Result<Self> {
        match self.entries.iter().find(|(o, _)| *o == [0; 3]) {
            Some((_, w)) if *w != T::zero() => Ok(Self { dim: self.dim, entries: vec![([0; 3], T::one() / *w)] }),
            _ => Err(GridError::SingularDiagonal),
        }
    }

    pub fn lower(&self) -> Self {
        self.filter(|o| lex_cmp(o, &[0; 3]) == Ordering::Less)
    }

    pub fn upper(&self) -> Self {
        self.filter(|o| lex_cmp(o, &[0; 3]) == Ordering::Greater)
    }

    fn filter(&self, keep: impl Fn(&Offset) -> bool) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().filter(|(o, _)| keep(o)).cloned().collect() }
    }

    /// Entries sorted lexicographically; handy for comparisons.
    pub fn sorted(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        Self { dim: self.dim, entries }
    }

    /// Same offsets with weights within `tol` (absolute), missing entries count as zero.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let close = |a: &Self, b: &Self| {
            a.entries.iter().all(|(o, w)| {
                let v = b.entries.iter().find(|(p, _)| p == o).map(|(_, v)| *v).unwrap_or_else(T::zero);
                (*w - v).abs2().sqrt() <= tol
            })
        };
        close(self, other) && close(other, self)
    }
}
