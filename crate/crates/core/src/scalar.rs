//! Floating-point scalar abstraction.
//!
//! All numerical code in this crate is generic over [`Scalar`] so the same
//! algorithms run in `f32` or `f64`. The shipped tracker and CLI use the
//! [`crate::Real`] alias.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + FftNum
    + Default
    + fmt::Display
    + fmt::LowerExp
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<S: Scalar>(v: f64) -> S {
    S::from_f64(v).expect("literal representable in scalar type")
}

/// Converts a `usize` into the working scalar type.
#[inline]
pub fn cast_usize<S: Scalar>(v: usize) -> S {
    S::from_usize(v).expect("usize representable in scalar type")
}
