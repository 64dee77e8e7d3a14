//! Scalar types for the real-valued parameters: the quasi-isometry constant,
//! cover scales and control-function bounds.
//!
//! Graph distances are always integers. Only the parameters compared against
//! them are generic, so the same checks run over `f64` for convenience or over
//! exact rationals when a boundary case must not depend on rounding.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Largest integer `m` with `m <= self`, or `None` for negative or non-finite values.
    fn floor_u64(self) -> Option<u64>;

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("graph distances fit every scalar type")
    }

    /// Conversion used by the JSON layer, which stores reals as `f64`.
    fn from_f64_lossy(x: f64) -> Option<Self>;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses a decimal (`2.5`, `-3`, `1e-2`) or, for exact types, a
    /// fraction `p/q`.
    fn parse_real(text: &str) -> Option<Self>;
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn floor_u64(self) -> Option<u64> {
                if self.is_finite() && self >= 0.0 {
                    Some(self.floor() as u64)
                } else {
                    None
                }
            }

            fn from_f64_lossy(x: f64) -> Option<Self> {
                x.is_finite().then_some(x as $t)
            }

            fn parse_real(text: &str) -> Option<Self> {
                let x: $t = text.trim().parse().ok()?;
                x.is_finite().then_some(x)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational64 {
    fn floor_u64(self) -> Option<u64> {
        if self < Rational64::from_integer(0) {
            return None;
        }
        u64::try_from(self.floor().to_integer()).ok()
    }

    fn from_f64_lossy(x: f64) -> Option<Self> {
        Rational64::approximate_float(x)
    }

    fn parse_real(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains('/') {
            return text.parse().ok();
        }
        let (mantissa, exp) = match text.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if frac.starts_with(['+', '-']) || (int.is_empty() && frac.is_empty()) {
            return None;
        }
        let digits: i64 = format!("{int}{frac}").parse().ok()?;
        let shift = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
        let pow = 10i64.checked_pow(shift.unsigned_abs())?;
        Some(if shift >= 0 {
            Rational64::from_integer(digits.checked_mul(pow)?)
        } else {
            Rational64::new(digits, pow)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors() {
        assert_eq!(2.9f64.floor_u64(), Some(2));
        assert_eq!((-0.5f64).floor_u64(), None);
        assert_eq!(f32::INFINITY.floor_u64(), None);
        assert_eq!(Rational64::new(7, 2).floor_u64(), Some(3));
        assert_eq!(Rational64::new(-1, 2).floor_u64(), None);
    }

    #[test]
    fn rationals_from_decimal_json() {
        assert_eq!(Rational64::from_f64_lossy(3.0), Some(Rational64::from_integer(3)));
        assert_eq!(Rational64::from_f64_lossy(0.5), Some(Rational64::new(1, 2)));
        assert_eq!(Rational64::from_count(12), Rational64::from_integer(12));
    }

    #[test]
    fn exact_decimal_text() {
        assert_eq!(Rational64::parse_real("0.1"), Some(Rational64::new(1, 10)));
        assert_eq!(Rational64::parse_real("-2.50"), Some(Rational64::new(-5, 2)));
        assert_eq!(Rational64::parse_real("7/3"), Some(Rational64::new(7, 3)));
        assert_eq!(Rational64::parse_real("15e-1"), Some(Rational64::new(3, 2)));
        assert_eq!(Rational64::parse_real("3"), Some(Rational64::from_integer(3)));
        assert_eq!(Rational64::parse_real("."), None);
        assert_eq!(Rational64::parse_real("x"), None);
        assert_eq!(f64::parse_real("2.5"), Some(2.5));
        assert_eq!(f64::parse_real("inf"), None);
    }
}
