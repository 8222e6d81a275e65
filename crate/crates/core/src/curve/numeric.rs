//! Numeric sanity check of the curve: at rational `(c0, g0, x)` the exact
//! truncated series `y(x)` should sit on one of the quintic's roots.
//! Everything up to the root solve is exact; floats appear only there.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{compute_moments, MomentVariant, F_TEXT};
use super::expr::Expr;
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::loopcat::moment;
use crate::ring::{rational_to_f64, Field, Ring};
use crate::solver::Amplitudes;

/// All roots of `Σ_k a_k z^k` by Aberth–Ehrlich iteration. Vanishing
/// leading coefficients are dropped first, so the degree is the true one.
pub fn aberth_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut a: Vec<f64> = coeffs.to_vec();
    while a.last().is_some_and(|v| *v == 0.0) {
        a.pop();
    }
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = a[n];
    let a: Vec<f64> = a.iter().map(|v| v / lead).collect();
    // Cauchy bound for the starting circle
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let (mut p, mut dp) = (Complex64::zero(), Complex64::zero());
        for &ck in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + ck;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Where and how to probe the curve.
#[derive(Clone, Debug)]
pub struct NumericSetup {
    pub c0: BigRational,
    pub g0: BigRational,
    pub xs: Vec<BigRational>,
    /// Terms of `φ` kept in `x`.
    pub x_order: usize,
    /// Terms kept in `g`.
    pub g_order: usize,
    pub variant: MomentVariant,
    /// Two roots closer than this (relative to `|y|`) count as a tie.
    pub tie_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPoint {
    pub x: f64,
    pub y_series: f64,
    pub root_re: f64,
    pub root_im: f64,
    pub deviation: f64,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchReport {
    pub points: Vec<BranchPoint>,
    pub max_deviation: f64,
}

impl BranchReport {
    pub fn ambiguous(&self) -> bool {
        self.points.iter().any(|p| p.ambiguous)
    }
}

fn truncated_eval(s: &crate::ring::GSeries<BigRational>, g0: &BigRational, order: usize) -> BigRational {
    s.truncate(order).eval(g0)
}

/// Evaluate `y(x)` from the truncated series and the quintic's roots at
/// every grid point; the root nearest the series value is the branch.
pub fn numeric_branch_check(amps: &impl Amplitudes<BigRational>, setup: &NumericSetup) -> Result<BranchReport> {
    let NumericSetup { c0, g0, x_order, g_order, .. } = setup;
    let (n, nx) = (*g_order, *x_order);
    let m = compute_moments(amps, n)?;
    let phi: Vec<BigRational> = (0..=nx)
        .map(|k| Ok(truncated_eval(&moment(amps, &Word::letter_repeat(0, k), n)?, g0, n)))
        .collect::<Result<_>>()?;
    let at = |name: &str| truncated_eval(m.get(name).expect("moment"), g0, n);
    let p1 = at("1");
    let p12 = at("12");
    let p012 = at("012");
    let p4 = at(setup.variant.word());
    let exprs = F_TEXT.iter().map(|t| Expr::parse(t)).collect::<Result<Vec<_>>>()?;
    let one_minus_c = BigRational::one() - c0.clone();
    if one_minus_c.is_zero() {
        return Err(Error::Invalid("c0 = 1 is a pole of the shift".into()));
    }
    let points = setup
        .xs
        .par_iter()
        .map(|x| {
            if x.is_zero() {
                return Err(Error::Invalid("grid point x = 0".into()));
            }
            let sym = |s: &str| -> Option<BigRational> {
                Some(match s {
                    "c" => c0.clone(),
                    "g" => g0.clone(),
                    "x" => x.clone(),
                    "p1" => p1.clone(),
                    "p12" => p12.clone(),
                    "p012" => p012.clone(),
                    "p1202" => p4.clone(),
                    _ => return None,
                })
            };
            let f: Vec<f64> = exprs.iter().map(|e| e.eval(&sym).map(|v| rational_to_f64(&v))).collect::<Result<_>>()?;
            let phi_x = phi.iter().rev().fold(BigRational::zero(), |acc, pk| acc * x + pk);
            let x2 = x.clone() * x;
            let y = -(x.clone() * phi_x) - g0.checked_div(&x2)? + one_minus_c.mul_ref(x).checked_inv()?;
            let y = rational_to_f64(&y);
            let roots = aberth_roots(&f);
            let mut by_distance: Vec<(f64, Complex64)> = roots.iter().map(|r| ((*r - y).norm(), *r)).collect();
            by_distance.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (deviation, root) = *by_distance.first().ok_or_else(|| Error::Invalid("curve degenerates at this point".into()))?;
            let ambiguous = by_distance.get(1).is_some_and(|(_, r2)| (*r2 - root).norm() <= setup.tie_tol * y.abs().max(1.0));
            Ok(BranchPoint { x: rational_to_f64(x), y_series: y, root_re: root.re, root_im: root.im, deviation, ambiguous })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = points.iter().map(|p| p.deviation).fold(0.0, f64::max);
    Ok(BranchReport { points, max_deviation })
}
