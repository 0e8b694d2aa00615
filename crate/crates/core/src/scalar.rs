//! Scalar abstraction: every analysis routine is generic over the floating
//! point type. `f64` is the default throughout the CLI (see [`crate::Real`]);
//! `f32` works but loses enough precision that the shipped tolerances assume
//! `f64`.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal into `Self`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Lossy view as `f64`, used for diagnostics and serialization of errors.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl<T> Scalar for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// Binomial coefficient for the small orders used by derivative expansions.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}

/// Falling factorial `n·(n−1)·…·(n−k+1)`.
pub(crate) fn falling(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| f64::from(n - i)).product()
}
