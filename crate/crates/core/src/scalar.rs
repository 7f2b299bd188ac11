//! Floating point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the physics is written against.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// (1e-8 trace drift, 1e-10 hermiticity) assume `f64`; the `f32`
/// instantiation is useful for the closed-form formulas and quick scans.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Infallible for the implemented types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Machine-precision aware relative step for finite differences.
    fn fd_step() -> Self;
}

impl Real for f32 {
    fn fd_step() -> Self {
        3e-4
    }
}

impl Real for f64 {
    fn fd_step() -> Self {
        1e-6
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn ci<T: Real>(im: T) -> Cplx<T> {
    Complex::new(T::zero(), im)
}
