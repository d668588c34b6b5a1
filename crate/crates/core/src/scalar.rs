//! Numeric abstraction shared by the exact and floating-point solver paths.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_traits::{Num, ToPrimitive};

use crate::rational::Rat;

/// Field scalar used for piecewise linear and polynomial arithmetic.
///
/// Implemented by [`Rat`] (exact paths) and `f64` (floating-point paths).
/// The by-reference operator bounds let generic code avoid cloning
/// big-integer payloads on the right-hand side of arithmetic.
pub trait Scalar:
    Num
    + Clone
    + PartialOrd
    + Debug
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_rat(r: &Rat) -> Self;
    fn from_u64(n: u64) -> Self;
    fn to_f64_lossy(&self) -> f64;
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn from_u64(n: u64) -> Self {
        crate::rational::rat_u64(n)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

/// Total order for scalars that are known to be comparable.
///
/// The floating-point paths never produce NaN on valid instances; a NaN here
/// indicates a bug, so comparing one panics instead of silently misordering.
pub fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("incomparable scalar (NaN)")
}
