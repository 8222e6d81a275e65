use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::{ArithError, Field, Ring, Sqrt};

/// Power series in the cubic coupling `g`, either exact (`order == None`,
/// a polynomial) or known through `g^order`. Two finite orders are never
/// silently mixed: operators panic on a mismatch, the `checked_*` forms
/// return [`ArithError::TruncationMismatch`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GSeries<R> {
    coeffs: Vec<R>,
    order: Option<usize>,
}

fn common_order(a: Option<usize>, b: Option<usize>) -> Result<Option<usize>, ArithError> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(ArithError::TruncationMismatch { left: x, right: y }),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

impl<R: Ring> GSeries<R> {
    pub fn new(coeffs: Vec<R>, order: Option<usize>) -> Self {
        let mut s = GSeries { coeffs, order };
        s.normalize();
        s
    }

    pub fn exact(coeffs: Vec<R>) -> Self {
        Self::new(coeffs, None)
    }

    pub fn truncated(coeffs: Vec<R>, order: usize) -> Self {
        Self::new(coeffs, Some(order))
    }

    /// `O(g^(order+1))`.
    pub fn zero_to(order: usize) -> Self {
        GSeries { coeffs: Vec::new(), order: Some(order) }
    }

    pub fn constant(a: R) -> Self {
        Self::exact(vec![a])
    }

    /// `a * g^k`, exact.
    pub fn monomial(a: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.push(a);
        Self::exact(coeffs)
    }

    fn normalize(&mut self) {
        if let Some(n) = self.order {
            self.coeffs.truncate(n + 1);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Stored coefficients; entries past the end are zero.
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `g^k`. Asking past the truncation order is a logic
    /// error and panics.
    pub fn coeff(&self, k: usize) -> R {
        assert!(
            self.order.is_none_or(|n| k <= n),
            "coefficient g^{k} requested from a series known only to g^{}",
            self.order.unwrap_or(0)
        );
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&R> {
        self.coeffs.get(k)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Exact zero or zero through its truncation order.
    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |n| n.min(order));
        Self::new(self.coeffs.clone(), Some(order))
    }

    pub fn with_order(mut self, order: Option<usize>) -> Self {
        self.order = order;
        self.normalize();
        self
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> GSeries<S> {
        GSeries::new(self.coeffs.iter().map(f).collect(), self.order)
    }

    pub fn scale(&self, a: &R) -> Self {
        self.map(|x| x.mul_ref(a))
    }

    /// Multiply by `g^k`; the known order moves up with it.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return GSeries { coeffs: Vec::new(), order: self.order.map(|n| n + k) };
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        GSeries { coeffs, order: self.order.map(|n| n + k) }
    }

    /// Value of the (truncated) polynomial at a numeric coupling.
    pub fn eval(&self, g: &R) -> R {
        let mut acc = R::zero();
        for a in self.coeffs.iter().rev() {
            acc *= g;
            acc += a;
        }
        acc
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ArithError> {
        let order = common_order(self.order, rhs.order)?;
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), R::zero());
        }
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        Ok(Self::new(coeffs, order))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.checked_add(&-rhs.clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        let order = common_order(self.order, rhs.order)?;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(GSeries { coeffs: Vec::new(), order });
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(n) = order {
            len = len.min(n + 1);
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
        Ok(Self::new(out, order))
    }

    /// `self += a * b` through `self`'s order. The operands' own orders are
    /// not consulted; callers guarantee they are known that far.
    pub fn add_product_to_order(&mut self, a: &Self, b: &Self) {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return;
        }
        let mut len = a.coeffs.len() + b.coeffs.len() - 1;
        if let Some(n) = self.order {
            len = len.min(n + 1);
        }
        if self.coeffs.len() < len {
            self.coeffs.resize(len, R::zero());
        }
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                self.coeffs[i + j].add_product(x, y);
            }
        }
        self.normalize();
    }

    fn expect<T>(r: Result<T, ArithError>) -> T {
        r.unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<K: Field> GSeries<K> {
    /// Multiplicative inverse; requires an invertible constant term and a
    /// finite order unless the series is a nonzero constant.
    pub fn checked_inv(&self) -> Result<Self, ArithError> {
        let a0 = self.coeffs.first().filter(|a| !a.is_zero()).ok_or(ArithError::NotInvertible)?;
        let inv0 = a0.checked_inv()?;
        let n = match self.order {
            Some(n) => n,
            None if self.coeffs.len() == 1 => return Ok(Self::constant(inv0)),
            None => return Err(ArithError::NotInvertible),
        };
        let mut out: Vec<K> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = K::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_product(&self.coeffs[i], &out[k - i]);
            }
            out.push(-(acc.mul_ref(&inv0)));
        }
        Ok(Self::truncated(out, n))
    }
}

impl<K: Field + Sqrt> GSeries<K> {
    /// Square root with the branch fixed by the root of the constant term.
    pub fn checked_sqrt(&self) -> Result<Self, ArithError> {
        let n = self.order.ok_or(ArithError::NotInvertible)?;
        let a0 = self.coeffs.first().cloned().unwrap_or_else(K::zero);
        let s0 = a0.checked_sqrt().ok_or_else(|| ArithError::NoSquareRoot(format!("{a0:?}")))?;
        let two_s0_inv = (s0.add_ref(&s0)).checked_inv()?;
        let mut out = vec![s0];
        for k in 1..=n {
            let mut acc = self.coeff(k);
            for i in 1..k {
                acc -= &out[i].mul_ref(&out[k - i]);
            }
            out.push(acc.mul_ref(&two_s0_inv));
        }
        Ok(Self::truncated(out, n))
    }
}

impl<R: Ring> Zero for GSeries<R> {
    fn zero() -> Self {
        GSeries { coeffs: Vec::new(), order: None }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for GSeries<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for GSeries<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::expect(self.checked_add(&rhs))
    }
}

impl<R: Ring> Sub for GSeries<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::expect(self.checked_sub(&rhs))
    }
}

impl<R: Ring> Mul for GSeries<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::expect(self.checked_mul(&rhs))
    }
}

impl<R: Ring> Neg for GSeries<R> {
    type Output = Self;
    fn neg(self) -> Self {
        GSeries { coeffs: self.coeffs.into_iter().map(|a| -a).collect(), order: self.order }
    }
}

impl<'a, R: Ring> AddAssign<&'a GSeries<R>> for GSeries<R> {
    fn add_assign(&mut self, rhs: &'a GSeries<R>) {
        self.order = Self::expect(common_order(self.order, rhs.order));
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), R::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl<'a, R: Ring> SubAssign<&'a GSeries<R>> for GSeries<R> {
    fn sub_assign(&mut self, rhs: &'a GSeries<R>) {
        self.order = Self::expect(common_order(self.order, rhs.order));
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), R::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.normalize();
    }
}

impl<'a, R: Ring> MulAssign<&'a GSeries<R>> for GSeries<R> {
    fn mul_assign(&mut self, rhs: &'a GSeries<R>) {
        *self = Self::expect(self.checked_mul(rhs));
    }
}

impl<R: Ring> Ring for GSeries<R> {
    fn from_i64(v: i64) -> Self {
        Self::constant(R::from_i64(v))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        Self::expect(self.checked_mul(rhs))
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
    fn exact_times_truncated() {
        let a = GSeries::exact(vec![q(1), q(1)]);
        let b = GSeries::truncated(vec![q(1), q(1), q(1), q(1)], 2);
        assert_eq!(b.order(), Some(2));
        let p = a * b;
        assert_eq!(p, GSeries::truncated(vec![q(1), q(2), q(2)], 2));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = GSeries::truncated(vec![q(1)], 2);
        let b = GSeries::truncated(vec![q(1)], 3);
        assert_eq!(a.checked_mul(&b), Err(ArithError::TruncationMismatch { left: 2, right: 3 }));
    }

    #[test]
    #[should_panic(expected = "requested from a series")]
    fn coefficient_past_order_panics() {
        GSeries::truncated(vec![q(1)], 1).coeff(2);
    }

    #[test]
    fn inverse_and_sqrt() {
        let a = GSeries::truncated(vec![q(1), q(-4)], 6);
        let s = a.checked_sqrt().unwrap();
        assert_eq!(s.mul_ref(&s), a);
        let inv = a.checked_inv().unwrap();
        assert_eq!(inv.mul_ref(&a), GSeries::one().truncate(6));
    }
}
