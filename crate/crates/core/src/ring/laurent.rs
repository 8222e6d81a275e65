use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::{ArithError, Field, Ring, Sqrt};

/// Truncated Laurent series in `x`: `Σ_{e ≥ low} a_e x^e`, known through
/// `x^high` (`None` = exact Laurent polynomial). Leading and trailing zero
/// coefficients are trimmed, so `valuation()` is the true order of vanishing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XLaurent<R> {
    low: i32,
    coeffs: Vec<R>,
    high: Option<i32>,
}

fn min_high(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<R: Ring> XLaurent<R> {
    pub fn new(low: i32, coeffs: Vec<R>, high: Option<i32>) -> Self {
        let mut s = XLaurent { low, coeffs, high };
        s.normalize();
        s
    }

    pub fn monomial(a: R, e: i32) -> Self {
        Self::new(e, vec![a], None)
    }

    pub fn constant(a: R) -> Self {
        Self::monomial(a, 0)
    }

    /// `O(x^(high+1))`.
    pub fn zero_to(high: i32) -> Self {
        XLaurent { low: 0, coeffs: Vec::new(), high: Some(high) }
    }

    fn normalize(&mut self) {
        if let Some(h) = self.high {
            let keep = (h - self.low + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn valuation(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn high(&self) -> Option<i32> {
        self.high
    }

    /// Highest exponent with a stored (possibly nonzero) coefficient.
    pub fn top(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, e: i32) -> R {
        assert!(
            self.high.is_none_or(|h| e <= h),
            "coefficient x^{e} requested from a series known only to x^{}",
            self.high.unwrap_or(0)
        );
        if e < self.low {
            return R::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_else(R::zero)
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn truncate(&self, high: i32) -> Self {
        Self::new(self.low, self.coeffs.clone(), Some(min_high(self.high, Some(high)).unwrap()))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i32) -> Self {
        XLaurent {
            low: if self.coeffs.is_empty() { 0 } else { self.low + k },
            coeffs: self.coeffs.clone(),
            high: self.high.map(|h| h + k),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> XLaurent<S> {
        XLaurent::new(self.low, self.coeffs.iter().map(f).collect(), self.high)
    }

    pub fn scale(&self, a: &R) -> Self {
        self.map(|c| c.mul_ref(a))
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        let high = min_high(self.high, rhs.high);
        if self.coeffs.is_empty() && rhs.coeffs.is_empty() {
            return XLaurent { low: 0, coeffs: Vec::new(), high };
        }
        let low = match (self.valuation(), rhs.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let top = self.top().unwrap_or(low).max(rhs.top().unwrap_or(low));
        let mut coeffs = vec![R::zero(); (top - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(rhs.low - low) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::new(low, coeffs, high)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        let high = match (self.valuation(), rhs.valuation()) {
            (Some(va), Some(vb)) => min_high(self.high.map(|h| h + vb), rhs.high.map(|h| h + va)),
            (None, Some(vb)) => self.high.map(|h| h + vb),
            (Some(va), None) => rhs.high.map(|h| h + va),
            (None, None) => match (self.high, rhs.high) {
                (Some(a), Some(b)) => Some(a + b + 1),
                _ => None,
            },
        };
        if (self.coeffs.is_empty() && self.high.is_none()) || (rhs.coeffs.is_empty() && rhs.high.is_none()) {
            return Self::zero();
        }
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return XLaurent { low: 0, coeffs: Vec::new(), high };
        }
        let low = self.low + rhs.low;
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(h) = high {
            len = len.min((h - low + 1).max(0) as usize);
        }
        let mut out = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j].add_product(a, b);
            }
        }
        Self::new(low, out, high)
    }
}

impl<K: Field> XLaurent<K> {
    /// Inverse of a series with nonzero leading term; relative precision is
    /// preserved, so `high` becomes `high - 2 * valuation`.
    pub fn checked_inv(&self) -> Result<Self, ArithError> {
        let v = self.valuation().ok_or(ArithError::NotInvertible)?;
        let inv0 = self.coeffs[0].checked_inv()?;
        let h = match self.high {
            Some(h) => h - 2 * v,
            None if self.coeffs.len() == 1 => return Ok(Self::monomial(inv0, -v)),
            None => return Err(ArithError::NotInvertible),
        };
        let m = (h + v) as usize;
        let mut out: Vec<K> = Vec::with_capacity(m + 1);
        out.push(inv0.clone());
        for k in 1..=m {
            let mut acc = K::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_product(&self.coeffs[i], &out[k - i]);
            }
            out.push(-(acc.mul_ref(&inv0)));
        }
        Ok(Self::new(-v, out, Some(h)))
    }

    /// Value of a finite Laurent polynomial at `x` (the truncation is ignored).
    pub fn eval(&self, x: &K) -> Result<K, ArithError> {
        let xinv = x.checked_inv();
        let mut acc = K::zero();
        for (e, c) in self.terms() {
            let p = if e >= 0 { x.pow(e as u32) } else { xinv.clone()?.pow((-e) as u32) };
            acc.add_product(c, &p);
        }
        Ok(acc)
    }
}

impl<K: Field + Sqrt> XLaurent<K> {
    /// Square root for an even valuation whose leading coefficient has one.
    pub fn checked_sqrt(&self) -> Result<Self, ArithError> {
        let v = self.valuation().ok_or(ArithError::NotInvertible)?;
        let h = self.high.ok_or(ArithError::NotInvertible)?;
        if v % 2 != 0 {
            return Err(ArithError::NoSquareRoot(format!("x^{v}")));
        }
        let a0 = &self.coeffs[0];
        let s0 = a0.checked_sqrt().ok_or_else(|| ArithError::NoSquareRoot(format!("{a0:?}")))?;
        let inv = s0.add_ref(&s0).checked_inv()?;
        let m = (h - v) as usize;
        let mut out = vec![s0];
        for k in 1..=m {
            let mut acc = self.coeffs.get(k).cloned().unwrap_or_else(K::zero);
            for i in 1..k {
                acc -= &out[i].mul_ref(&out[k - i]);
            }
            out.push(acc.mul_ref(&inv));
        }
        Ok(Self::new(v / 2, out, Some(v / 2 + m as i32)))
    }
}

impl<R: Ring> Zero for XLaurent<R> {
    fn zero() -> Self {
        XLaurent { low: 0, coeffs: Vec::new(), high: None }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for XLaurent<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for XLaurent<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_impl(&rhs, false)
    }
}

impl<R: Ring> Sub for XLaurent<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_impl(&rhs, true)
    }
}

impl<R: Ring> Mul for XLaurent<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl<R: Ring> Neg for XLaurent<R> {
    type Output = Self;
    fn neg(self) -> Self {
        XLaurent { low: self.low, coeffs: self.coeffs.into_iter().map(|a| -a).collect(), high: self.high }
    }
}

impl<'a, R: Ring> AddAssign<&'a XLaurent<R>> for XLaurent<R> {
    fn add_assign(&mut self, rhs: &'a XLaurent<R>) {
        *self = self.add_impl(rhs, false);
    }
}

impl<'a, R: Ring> SubAssign<&'a XLaurent<R>> for XLaurent<R> {
    fn sub_assign(&mut self, rhs: &'a XLaurent<R>) {
        *self = self.add_impl(rhs, true);
    }
}

impl<'a, R: Ring> MulAssign<&'a XLaurent<R>> for XLaurent<R> {
    fn mul_assign(&mut self, rhs: &'a XLaurent<R>) {
        *self = self.mul_impl(rhs);
    }
}

impl<R: Ring> Ring for XLaurent<R> {
    fn from_i64(v: i64) -> Self {
        Self::constant(R::from_i64(v))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn monomials_multiply() {
        let a = XLaurent::monomial(q(1), -2);
        let b = XLaurent::monomial(q(1), 3);
        assert_eq!(a * b, XLaurent::monomial(q(1), 1));
    }

    #[test]
    fn validity_window() {
        // (x^-2 + O(x^3)) * (1 + x + O(x^2)) is known through x^0.
        let a = XLaurent::new(-2, vec![q(1)], Some(3));
        let b = XLaurent::new(0, vec![q(1), q(1)], Some(2));
        let p = a * b;
        assert_eq!(p.high(), Some(0));
        assert_eq!(p.coeff(-1), q(1));
    }

    #[test]
    fn leading_zeros_trimmed() {
        let a = XLaurent::new(-3, vec![q(0), q(0), q(5)], None);
        assert_eq!(a.valuation(), Some(-1));
    }

    #[test]
    fn semicircle_sqrt() {
        let a = XLaurent::new(0, vec![q(1), q(0), q(-4)], Some(12));
        let s = a.checked_sqrt().unwrap();
        assert_eq!(s.mul_ref(&s), a);
        // sqrt(1-4x^2) = 1 - 2x^2 - 2x^4 - 4x^6 - ...
        assert_eq!(s.coeff(4), q(-2));
        assert_eq!(s.coeff(6), q(-4));
        let inv = a.checked_inv().unwrap();
        assert_eq!((inv * a).truncate(12), XLaurent::one().truncate(12));
    }
}
