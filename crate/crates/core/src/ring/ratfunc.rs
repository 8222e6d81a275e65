use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, ArithError, Field, Poly, Ring};

/// Element of Q(c) in canonical form: `gcd(num, den) = 1`, `den` monic,
/// zero is `0/1`. Structural equality is therefore mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly<BigRational>,
    den: Poly<BigRational>,
}

impl RationalFunction {
    pub fn new(num: Poly<BigRational>, den: Poly<BigRational>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(num: Poly<BigRational>) -> Self {
        RationalFunction { num, den: Poly::one() }
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn constant(q: BigRational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn numer(&self) -> &Poly<BigRational> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<BigRational> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    fn reduce(num: Poly<BigRational>, den: Poly<BigRational>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).expect("gcd").0, den.div_rem(&g).expect("gcd").0)
        };
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    /// Value at a rational coupling; errors if `c0` is a pole.
    pub fn eval(&self, c0: &BigRational) -> Result<BigRational, ArithError> {
        let d = self.den.eval(c0);
        if d.is_zero() {
            return Err(ArithError::Pole { at: format_rational(c0) });
        }
        Ok(self.num.eval(c0) / d)
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let rhs_num = if negate { -rhs.num.clone() } else { rhs.num.clone() };
        if self.den == rhs.den {
            if self.is_polynomial() {
                return RationalFunction { num: self.num.clone() + rhs_num, den: self.den.clone() };
            }
            return Self::reduce(self.num.clone() + rhs_num, self.den.clone());
        }
        if self.num.is_zero() {
            return RationalFunction { num: rhs_num, den: rhs.den.clone() };
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        let num = self.num.mul_ref(&rhs.den) + rhs_num.mul_ref(&self.den);
        Self::reduce(num, self.den.mul_ref(&rhs.den))
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction { num: self.num.mul_ref(&rhs.num), den: Poly::one() };
        }
        Self::reduce(self.num.mul_ref(&rhs.num), self.den.mul_ref(&rhs.den))
    }
}

impl From<Poly<BigRational>> for RationalFunction {
    fn from(p: Poly<BigRational>) -> Self {
        Self::from_poly(p)
    }
}

impl From<Poly<BigInt>> for RationalFunction {
    fn from(p: Poly<BigInt>) -> Self {
        Self::from_poly(p.to_rational())
    }
}

impl From<&Poly<BigInt>> for RationalFunction {
    fn from(p: &Poly<BigInt>) -> Self {
        Self::from_poly(p.to_rational())
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction { num: Poly::one(), den: Poly::one() }
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_impl(&rhs, false)
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_impl(&rhs, true)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl<'a> AddAssign<&'a RationalFunction> for RationalFunction {
    fn add_assign(&mut self, rhs: &'a RationalFunction) {
        if self.is_polynomial() && rhs.is_polynomial() {
            self.num += &rhs.num;
        } else {
            *self = self.add_impl(rhs, false);
        }
    }
}

impl<'a> SubAssign<&'a RationalFunction> for RationalFunction {
    fn sub_assign(&mut self, rhs: &'a RationalFunction) {
        if self.is_polynomial() && rhs.is_polynomial() {
            self.num -= &rhs.num;
        } else {
            *self = self.add_impl(rhs, true);
        }
    }
}

impl<'a> MulAssign<&'a RationalFunction> for RationalFunction {
    fn mul_assign(&mut self, rhs: &'a RationalFunction) {
        *self = self.mul_impl(rhs);
    }
}

impl Ring for RationalFunction {
    fn from_i64(v: i64) -> Self {
        Self::constant(BigRational::from_integer(v.into()))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
}

impl Field for RationalFunction {
    fn checked_inv(&self) -> Result<Self, ArithError> {
        if self.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::constant(q.clone())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        let p = |v: &[i64]| Poly::new(v.iter().map(|&a| BigRational::from_integer(a.into())).collect());
        RationalFunction::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn canonical_form() {
        // (2 - 2c^2) / (2 + 2c) = 1 - c
        assert_eq!(rf(&[2, 0, -2], &[2, 2]), rf(&[1, -1], &[1]));
        assert!(rf(&[1], &[0, 2]).denom().leading().unwrap().is_one());
    }

    #[test]
    fn field_ops() {
        let a = rf(&[1], &[1, -1]);
        let b = rf(&[1], &[1, 2]);
        let s = a.clone() + b.clone();
        assert_eq!(s, rf(&[2, 1], &[1, 1, -2]));
        assert_eq!(a.checked_div(&a).unwrap(), RationalFunction::one());
        assert_eq!(RationalFunction::zero().checked_inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn pole_detected() {
        let d = rf(&[1], &[1, 1, -2]);
        let one = BigRational::one();
        assert!(matches!(d.eval(&one), Err(ArithError::Pole { .. })));
        let q = BigRational::new(1.into(), 4.into());
        assert_eq!(d.eval(&q).unwrap(), BigRational::new(8.into(), 9.into()));
    }
}
