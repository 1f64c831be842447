//! Scalar abstraction shared by the simulators.
//!
//! Every state type in this crate is generic over a real floating-point type
//! `T`; amplitudes are `Complex<T>`. Only `f32` and `f64` are provided.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Complex amplitude over the real scalar `T`.
pub type C<T> = Complex<T>;

/// Real floating-point scalar usable by the simulators.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Maximum entry-wise deviation of `U†U` from the identity accepted for a gate.
    const UNITARITY_TOL: f64;
    /// Default singular-value cutoff applied to every SVD split.
    const DEFAULT_SVD_CUTOFF: f64;

    /// Converts an `f64` literal. Panics only for non-representable input, which
    /// cannot happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f64 {
    const UNITARITY_TOL: f64 = 1e-12;
    const DEFAULT_SVD_CUTOFF: f64 = 1e-12;
}

impl Real for f32 {
    const UNITARITY_TOL: f64 = 1e-5;
    const DEFAULT_SVD_CUTOFF: f64 = 1e-6;
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// `-p log2 p`, with the convention `0 log 0 = 0`.
#[inline]
pub(crate) fn neg_p_log2_p<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -(p * p.log2())
    }
}
