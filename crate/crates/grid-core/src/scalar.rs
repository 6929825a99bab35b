use nalgebra::ComplexField;
use num_complex::Complex64;
use std::fmt::{Debug, Display};

/// Field scalar used by grid functions and stencils.
///
/// Real problems use `f64`, the Helmholtz family uses `Complex64`. The
/// nalgebra bound is what lets the dense oracles and block solvers share the
/// same element type.
pub trait Scalar:
    ComplexField<RealField = f64> + Copy + Default + Debug + Display + PartialEq + Send + Sync + 'static
{
    const IS_COMPLEX: bool;

    fn from_re(x: f64) -> Self;
    /// Squared modulus.
    fn abs2(self) -> f64;
    fn conj(self) -> Self;
    fn finite(self) -> bool;
    fn re(self) -> f64;
    fn im(self) -> f64;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    #[inline]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline]
    fn abs2(self) -> f64 {
        self * self
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    #[inline]
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
}
