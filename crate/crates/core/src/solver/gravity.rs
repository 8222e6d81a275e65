//! One-matrix (pure gravity) check: the series solution against the closed
//! form obtained by treating the one-letter generating equation as a
//! quadratic in `Φ`.
//!
//! With `g x Δ²Φ = (g/x)(Φ − 1 − p1 x)` the equation reads
//! `x²Φ² + (g/x − 1)Φ + 1 − g/x − g p1 = 0`; the branch analytic at `x = 0`
//! is `Φ = [(1 − g/x) − √disc] / (2x²)`. The square root is expanded in `g`
//! first, each coefficient a truncated Laurent series in `x`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{solve_series, ModelSpec};
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::ring::{Ring, XLaurent};
use crate::solver::sparse::Amplitudes;

/// One root of the quadratic: `coeffs[n]` is the `g^n` coefficient as a
/// Laurent series in `x`.
#[derive(Clone, Debug)]
pub struct GravityBranch {
    pub by_order: Vec<XLaurent<BigRational>>,
}

impl GravityBranch {
    /// Lowest `x` power over all orders; negative means not a power series.
    pub fn min_valuation(&self) -> Option<i32> {
        self.by_order.iter().filter_map(|s| s.valuation()).min()
    }
}

#[derive(Clone, Debug)]
pub struct PureGravityCheck {
    /// `series[n][k]` = coefficient of `x^k g^n`.
    pub series: Vec<Vec<BigRational>>,
    pub analytic: GravityBranch,
    pub other: GravityBranch,
    /// First `(k, n)` where the analytic branch and the series disagree.
    pub first_mismatch: Option<(i32, usize)>,
    /// First nonzero coefficient of the literal `(g/x²)(Φ − 1 − p1 x)` form.
    pub literal_form_residual: Option<(usize, usize, BigRational)>,
    /// First nonzero coefficient of the `g x Δ²Φ` form (expected: none).
    pub operator_form_residual: Option<(usize, usize, BigRational)>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn solve_pure_gravity(max_order: usize, max_x: usize) -> Result<PureGravityCheck> {
    // The literal-form residual at x^k reads p_{k+2}; solve two letters deeper.
    let spec = ModelSpec::<BigRational>::pure_gravity(max_order, max_x + 2);
    let table = solve_series(&spec)?;
    let p = |k: usize, n: usize| -> BigRational {
        table.amplitude(&Word::letter_repeat(0, k), n).expect("inside the solved range")
    };
    let series: Vec<Vec<BigRational>> = (0..=max_order).map(|n| (0..=max_x).map(|k| p(k, n)).collect()).collect();

    let h = (max_x + max_order + 4) as i32;
    let disc: Vec<XLaurent<BigRational>> = (0..=max_order)
        .map(|n| {
            let base = match n {
                0 => XLaurent::new(0, vec![q(1), q(0), q(-4)], None),
                1 => XLaurent::new(-1, vec![q(-2), q(0), q(4)], None),
                2 => XLaurent::monomial(q(1), -2),
                _ => XLaurent::zero(),
            };
            if n >= 1 {
                base + XLaurent::monomial(q(4) * p(1, n - 1), 2)
            } else {
                base
            }
        })
        .collect();

    let s0 = disc[0].truncate(h).checked_sqrt()?;
    let inv = (s0.clone() + s0.clone()).checked_inv()?;
    let mut roots: Vec<XLaurent<BigRational>> = vec![s0];
    for n in 1..=max_order {
        let mut acc = disc[n].clone();
        for i in 1..n {
            acc -= &roots[i].mul_ref(&roots[n - i]);
        }
        roots.push(acc.mul_ref(&inv));
    }

    let half = BigRational::new(1.into(), 2.into());
    let lin = |n: usize| match n {
        0 => XLaurent::constant(q(1)),
        1 => XLaurent::monomial(q(-1), -1),
        _ => XLaurent::zero(),
    };
    let branch = |sign: i64| GravityBranch {
        by_order: (0..=max_order)
            .map(|n| (lin(n) + roots[n].scale(&q(sign))).shift(-2).scale(&half))
            .collect(),
    };
    let analytic = branch(-1);
    let other = branch(1);

    let mut first_mismatch = None;
    'outer: for n in 0..=max_order {
        let s = &analytic.by_order[n];
        let hi = s.high().unwrap_or(max_x as i32);
        if hi < max_x as i32 {
            return Err(Error::InsufficientDepth {
                what: "closed-form x precision".into(),
                needed: max_x,
                available: hi.max(0) as usize,
            });
        }
        let lo = s.valuation().unwrap_or(0).min(0);
        for k in lo..=max_x as i32 {
            let expect = if k < 0 { q(0) } else { series[n][k as usize].clone() };
            if s.coeff(k) != expect {
                first_mismatch = Some((k, n));
                break 'outer;
            }
        }
    }

    let form_residual = |shift: usize| -> Option<(usize, usize, BigRational)> {
        for n in 0..=max_order {
            for k in 0..=max_x {
                let mut r = p(k, n);
                if k == 0 && n == 0 {
                    r -= &BigRational::one();
                }
                // subtracting 1 + p1 x removes everything below x^2 of Φ
                if n >= 1 && k + shift >= 2 {
                    r -= &p(k + shift, n - 1);
                }
                if k >= 2 {
                    for a in 0..=k - 2 {
                        for m in 0..=n {
                            r -= &p(a, m).mul_ref(&p(k - 2 - a, n - m));
                        }
                    }
                }
                if !r.is_zero() {
                    return Some((k, n, r));
                }
            }
        }
        None
    };

    Ok(PureGravityCheck {
        series,
        analytic,
        other,
        first_mismatch,
        literal_form_residual: form_residual(2),
        operator_form_residual: form_residual(1),
    })
}

impl PureGravityCheck {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_agrees() {
        let chk = solve_pure_gravity(4, 8).unwrap();
        assert!(chk.matches(), "{:?}", chk.first_mismatch);
        assert_eq!(chk.series[0][4], q(2));
        assert_eq!(chk.series[0][6], q(5));
        assert!(chk.operator_form_residual.is_none());
        assert!(chk.literal_form_residual.is_some());
        assert!(chk.other.min_valuation().unwrap() < 0);
    }
}
