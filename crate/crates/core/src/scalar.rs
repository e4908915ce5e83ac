//! Scalar abstractions shared by the floating-point stages (denoisers and
//! quality metrics). Integer stages work on [`Sample`](crate::Sample) directly.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real-valued scalar used for filter arithmetic and metrics.
///
/// Implemented for `f32` and `f64`. The codec itself always instantiates
/// filters with [`crate::Real`] so that encoder and decoder agree bit-exactly.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static
{
    #[inline]
    fn of_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer representable as float")
    }

    #[inline]
    fn of_f64(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite f64 representable")
    }

    #[inline]
    fn of_usize(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize representable as float")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static
{
}

/// Rounds half away from zero and converts to an integer sample.
///
/// Values outside the `i32` range saturate.
#[inline]
pub fn round_to_sample<F: Real>(v: F) -> i32 {
    let r = v.round();
    match r.to_i32() {
        Some(s) => s,
        None if r.is_sign_negative() => i32::MIN,
        None => i32::MAX,
    }
}
