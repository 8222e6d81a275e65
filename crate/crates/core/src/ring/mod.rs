//! Scalar rings: the coefficient domains everything else is generic over.
//!
//! `Ring` is the minimal commutative-ring surface the solver needs; `Field`
//! adds checked division. Exact types (`BigInt`, `BigRational`, polynomials
//! and rational functions in `c`) and floats share the same traits, so the
//! same recursion can run symbolically, at a rational coupling, or in f64.

mod gseries;
mod laurent;
mod poly;
mod ratfunc;
mod text;

use std::fmt;
use std::ops::{AddAssign, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use gseries::GSeries;
pub use laurent::XLaurent;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use text::{format_rational, parse_rational, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at c = {at}")]
    Pole { at: String },
    #[error("truncation mismatch: orders {left} and {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("leading coefficient {0} has no square root in this ring")]
    NoSquareRoot(String),
    #[error("series has no invertible leading term")]
    NotInvertible,
}

pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn from_i64(v: i64) -> Self;

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r *= rhs;
        r
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r += rhs;
        r
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r -= rhs;
        r
    }

    /// `self += a * b`.
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += &a.mul_ref(b);
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc *= self;
        }
        acc
    }
}

pub trait Field: Ring {
    fn checked_inv(&self) -> Result<Self, ArithError>;

    fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self.mul_ref(&rhs.checked_inv()?))
    }

    fn from_rational(q: &BigRational) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }
}

/// Exact square roots of scalars, where they exist.
pub trait Sqrt: Sized {
    fn checked_sqrt(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

/// Machine integers with overflow treated as a hard error, never wrapped:
/// exact as long as it runs, and several times faster than `BigInt` for the
/// small coefficients of bounded-grade tables.
impl Ring for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("i128 overflow in exact arithmetic")
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        let p = a.checked_mul(*b).and_then(|p| p.checked_add(*self));
        *self = p.expect("i128 overflow in exact arithmetic");
    }
}

impl Ring for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

impl Field for BigRational {
    fn checked_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Sqrt for BigRational {
    fn checked_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| BigRational::new(n, d))
    }
}

macro_rules! impl_float {
    ($f:ty) => {
        impl Ring for $f {
            fn from_i64(v: i64) -> Self {
                v as $f
            }
        }

        impl Field for $f {
            fn checked_inv(&self) -> Result<Self, ArithError> {
                if *self == 0.0 {
                    Err(ArithError::DivisionByZero)
                } else {
                    Ok(1.0 / *self)
                }
            }

            fn from_rational(q: &BigRational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $f
            }
        }

        impl Sqrt for $f {
            fn checked_sqrt(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }
        }
    };
}

impl_float!(f32);
impl_float!(f64);

/// Exact rational to f64, for the few places floats appear (root finding).
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(q(9, 4).checked_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).checked_sqrt(), None);
        assert_eq!(q(-1, 1).checked_sqrt(), None);
    }

    #[test]
    fn float_division_by_zero() {
        assert_eq!(0.0f64.checked_inv(), Err(ArithError::DivisionByZero));
        assert_eq!(4.0f32.checked_inv(), Ok(0.25));
        assert_eq!(<f64 as Field>::from_ratio(1, 4), 0.25);
    }

    #[test]
    fn pow_and_product() {
        let mut a = q(1, 2);
        a.add_product(&q(1, 3), &q(3, 1));
        assert_eq!(a, q(3, 2));
        assert_eq!(q(2, 3).pow(3), q(8, 27));
    }
}
