use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ArithError, Field, Ring};

/// Dense univariate polynomial in the coupling `c`, ascending coefficients,
/// never with a trailing zero (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(a: R) -> Self {
        Self::new(vec![a])
    }

    /// The variable `c`.
    pub fn var() -> Self {
        Poly { coeffs: vec![R::zero(), R::one()] }
    }

    pub fn monomial(a: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.push(a);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for a in self.coeffs.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Multiply by `c^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn scale(&self, a: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(a)).collect())
    }

    /// Substitute another polynomial for `c`.
    pub fn compose(&self, inner: &Poly<R>) -> Poly<R> {
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc *= inner;
            acc += &Poly::constant(a.clone());
        }
        acc
    }

    fn add_scaled(&mut self, other: &Self, sign_neg: bool) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), R::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if sign_neg {
                *a -= b;
            } else {
                *a += b;
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn mul_poly(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_product(a, b);
            }
        }
        Poly::new(out)
    }
}

impl<K: Field> Poly<K> {
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.checked_inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].checked_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].mul_ref(&lead_inv);
            if q.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let t = q.mul_ref(b);
                rem[k + j] -= &t;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.mul_ref(&K::from_i64(k as i64)))
                .collect(),
        )
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|a| BigRational::from_integer(a.clone()))
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly { coeffs: vec![R::one()] }
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, false);
        self
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, true);
        self
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_poly(&rhs)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|a| -a).collect() }
    }
}

impl<'a, R: Ring> AddAssign<&'a Poly<R>> for Poly<R> {
    fn add_assign(&mut self, rhs: &'a Poly<R>) {
        self.add_scaled(rhs, false);
    }
}

impl<'a, R: Ring> SubAssign<&'a Poly<R>> for Poly<R> {
    fn sub_assign(&mut self, rhs: &'a Poly<R>) {
        self.add_scaled(rhs, true);
    }
}

impl<'a, R: Ring> MulAssign<&'a Poly<R>> for Poly<R> {
    fn mul_assign(&mut self, rhs: &'a Poly<R>) {
        *self = self.mul_poly(rhs);
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn from_i64(v: i64) -> Self {
        Poly::constant(R::from_i64(v))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_poly(rhs)
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let need = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, R::zero());
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                self.coeffs[i + j].add_product(x, y);
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&a| BigRational::from_integer(a.into())).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(qp(&[1, 0, 0]).degree(), Some(0));
        assert!(qp(&[0, 0]).is_zero());
        assert_eq!(qp(&[]).degree(), None);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = qp(&[1, 2, 3, 4, 5]);
        let b = qp(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q * b + r, a);
    }

    #[test]
    fn gcd_of_products() {
        // (1 - c)(1 + 2c) and (1 - c)(3 + c)
        let d = qp(&[1, -1]);
        let a = d.clone() * qp(&[1, 2]);
        let b = d.clone() * qp(&[3, 1]);
        assert_eq!(a.gcd(&b), d.monic());
    }

    #[test]
    fn horner_eval() {
        let p = Poly::new(vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(10));
    }

    #[test]
    fn compose_with_shift() {
        let p = qp(&[0, 0, 1]);
        assert_eq!(p.compose(&qp(&[1, 1])), qp(&[1, 2, 1]));
    }
}
