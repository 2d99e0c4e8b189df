//! Scalar abstraction shared by every solver in the crate.
//!
//! Floating types (`f32`, `f64`) carry a small default tolerance; exact
//! rationals compare with zero slack, which turns the simplex routine and the
//! correspondence search into exact procedures.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Number type usable for distances, coordinates and LP entries.
pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Comparison slack used when no explicit tolerance is supplied.
    fn default_tol() -> Self;

    /// `true` for types whose arithmetic is exact.
    fn is_exact() -> bool {
        false
    }

    /// Converts an `f64` literal, panicking if the type cannot represent it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| panic!("{x} is not representable"))
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| panic!("{n} is not representable"))
    }

    /// Lossy view used for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
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

    fn half(self) -> Self {
        self / (Self::one() + Self::one())
    }
}

impl Scalar for f64 {
    fn default_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn default_tol() -> Self {
        1e-5
    }
}

impl Scalar for Rational64 {
    fn default_tol() -> Self {
        Rational64::from_integer(0)
    }

    fn is_exact() -> bool {
        true
    }
}

/// Chebyshev (ℓ∞) distance between two coordinate vectors of equal length.
pub fn linf<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max_of((x - y).abs()))
}

/// `|a - b| <= tol`
pub fn approx_eq<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linf_takes_the_largest_coordinate_gap() {
        assert_eq!(linf(&[0.0, 0.0], &[1.0, -2.0]), 2.0);
        assert_eq!(linf::<f64>(&[], &[]), 0.0);
    }

    #[test]
    fn rational_literals_are_exact() {
        let half = Rational64::lit(0.5);
        assert_eq!(half, Rational64::new(1, 2));
        assert_eq!(Rational64::of_usize(3).half(), Rational64::new(3, 2));
        assert!(Rational64::is_exact());
        assert_eq!(Rational64::default_tol(), Rational64::from_integer(0));
    }
}
