//! Numeric scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field-like scalar used for weights, times and cycle means.
///
/// Implemented for `f32`, `f64` and exact rationals (`Ratio<i64>`). The
/// tolerances are zero for exact types.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance for comparing derived quantities.
    fn tolerance() -> Self;

    /// Relative tolerance used when testing event-time series for periodicity.
    fn relative_tolerance() -> Self;

    /// True for values that stand for minus infinity (floats only).
    fn is_neg_infinite(&self) -> bool {
        false
    }

    /// True for NaN or ±infinity (floats only).
    fn is_non_finite(&self) -> bool {
        false
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn relative_tolerance() -> Self {
        1e-10
    }
    fn is_neg_infinite(&self) -> bool {
        *self == f64::NEG_INFINITY
    }
    fn is_non_finite(&self) -> bool {
        !self.is_finite()
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
    fn relative_tolerance() -> Self {
        1e-5
    }
    fn is_neg_infinite(&self) -> bool {
        *self == f32::NEG_INFINITY
    }
    fn is_non_finite(&self) -> bool {
        !self.is_finite()
    }
}

impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn relative_tolerance() -> Self {
        Ratio::from_integer(0)
    }
}
