//! Floating-point scalar abstraction shared by the statevector kernel and the
//! dense gate matrices.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type backing amplitudes and matrix entries: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static {
    /// Tolerance used when checking that a state stays normalized.
    const NORM_TOL: f64;

    /// Converts an `f64` literal or parameter into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every Real type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const NORM_TOL: f64 = 1e-5;
}

impl Real for f64 {
    const NORM_TOL: f64 = 1e-12;
}

/// `e^{i phi}` in the requested precision.
#[inline]
pub fn cis<T: Real>(phi: f64) -> Complex<T> {
    Complex::new(T::of(phi.cos()), T::of(phi.sin()))
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::of(re), T::of(im))
}
