//! Scalar abstraction over probability entries.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Num, Signed, ToPrimitive};
use num::Zero;

use crate::prob::Probability;

/// Numeric backing for probability tables: arbitrary-precision rationals
/// or IEEE floats.
///
/// Table-level comparisons go through a tolerance of the same scalar type;
/// exact scalars use zero, so "within tolerance" degrades to equality.
pub trait Scalar:
    Num + Signed + PartialOrd + Clone + fmt::Debug + fmt::Display + ToPrimitive + 'static
{
    /// True when arithmetic in this scalar carries no rounding error.
    const EXACT: bool;

    /// Default comparison tolerance for tables of this scalar.
    fn default_tolerance() -> Self;

    /// The value `n / d`. Panics when `d == 0`.
    fn from_ratio(n: i64, d: i64) -> Self;

    /// Clamp into `[0, 1]`, forgiving rounding noise just outside the
    /// interval. `None` when the value is negative beyond the noise band.
    /// Values above the band are passed through; the table-level
    /// normalization check rejects them.
    fn sanitize_unit(self) -> Option<Self>;

    /// Wrap into the mode-tagged dynamic probability value.
    fn into_probability(self) -> Probability;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn default_tolerance() -> Self {
        BigRational::zero()
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sanitize_unit(self) -> Option<Self> {
        if self.is_negative() {
            None
        } else {
            Some(self)
        }
    }

    fn into_probability(self) -> Probability {
        Probability::Exact(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn default_tolerance() -> Self {
        1e-9
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f64 / d as f64
    }

    fn sanitize_unit(self) -> Option<Self> {
        // Construction noise band: entries this close to [0, 1] are snapped.
        const BAND: f64 = 1e-12;
        if self < -BAND {
            None
        } else if self < 0.0 {
            Some(0.0)
        } else if self > 1.0 && self <= 1.0 + BAND {
            Some(1.0)
        } else {
            Some(self)
        }
    }

    fn into_probability(self) -> Probability {
        Probability::Approx(self)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn default_tolerance() -> Self {
        1e-4
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        n as f32 / d as f32
    }

    fn sanitize_unit(self) -> Option<Self> {
        const BAND: f32 = 1e-6;
        if self < -BAND {
            None
        } else if self < 0.0 {
            Some(0.0)
        } else if self > 1.0 && self <= 1.0 + BAND {
            Some(1.0)
        } else {
            Some(self)
        }
    }

    fn into_probability(self) -> Probability {
        Probability::Approx(self as f64)
    }
}
