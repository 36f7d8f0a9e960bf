//! The floating-point abstraction every numerical routine is written against.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};
use rustfft::FftNum;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar usable by the sampling, fitting and FFT code: `f32` or `f64`.
///
/// Tolerances in this crate are tuned for `f64`; `f32` works but most
/// default thresholds sit below its resolution.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Signed
    + NumAssign
    + FftNum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Signed
        + NumAssign
        + FftNum
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + Serialize
        + DeserializeOwned
        + 'static
{
}

/// Converts an `f64` literal into `T`. Out-of-range values saturate the way
/// `as` casts do.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable")
}

#[inline]
pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("usize representable")
}

#[inline]
pub(crate) fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
