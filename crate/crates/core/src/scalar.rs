//! Scalar abstraction: everything in this crate is generic over the real
//! floating-point type carrying the complex entries.

use std::fmt;
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// The bundle of numeric capabilities the algebra needs from its real type.
///
/// Blanket-implemented for anything that satisfies the bounds, which in
/// practice means `f32` and `f64`.
pub trait RealScalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + 'static
{
}

impl<T> RealScalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum<Self>
        + fmt::Debug
        + fmt::Display
        + 'static
{
}

/// Complex scalar over the real type `T`.
pub type Scalar<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
///
/// Only used for fixed constants (tolerance defaults and the like), which
/// are representable in every supported scalar type.
pub(crate) fn real<T: RealScalar>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// `f64` view of a `T` value, for diagnostics and serialization.
pub(crate) fn as_f64<T: RealScalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
