//! The spectral curve: a quintic `Σ_k f_k(x) y^k = 0` in the shifted
//! resolvent `y`, with coefficients that depend on a handful of low moments
//! of the disk amplitudes.
//!
//! ```text
//! φ(x) = Σ_k x^k p[0^k],     y = −x φ − g/x² + s(x)
//! ```
//!
//! The printed shift is `s = 1/(1−c)`; the curve only vanishes on the solved
//! amplitudes with `s = 1/((1−c) x)` (see [`Shift`]). Everything is carried
//! multiplied through by `(1−c)`, so the coupling may be a polynomial in `c`:
//! `y' = (1−c) y` and the residual is `Σ_k f_k (1−c)^(5−k) y'^k`.

mod expr;
mod numeric;

use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::loopcat::{first_nonzero, moment, phi_series, LoopTruncation, Nonzero, XSeries};
use crate::ring::{GSeries, Ring, XLaurent};
use crate::solver::{AmplitudeMap, Amplitudes, ModelSpec, Recorder};

pub use expr::Expr;
pub use numeric::{aberth_roots, numeric_branch_check, BranchPoint, BranchReport, NumericSetup};

/// The moment constants entering the curve, each `Σ_n p[w](n) g^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSet<R> {
    pub p1: GSeries<R>,
    pub p11: GSeries<R>,
    pub p12: GSeries<R>,
    pub p112: GSeries<R>,
    pub p012: GSeries<R>,
    pub p1122: GSeries<R>,
    pub p1120: GSeries<R>,
    pub p1202: GSeries<R>,
    pub p1212: GSeries<R>,
    pub p0121: GSeries<R>,
}

/// Word behind each moment symbol.
pub const MOMENT_WORDS: [&str; 10] = ["1", "11", "12", "112", "012", "1122", "1120", "1202", "1212", "0121"];

impl<R: Ring> MomentSet<R> {
    pub fn get(&self, name: &str) -> Option<&GSeries<R>> {
        Some(match name {
            "1" => &self.p1,
            "11" => &self.p11,
            "12" => &self.p12,
            "112" => &self.p112,
            "012" => &self.p012,
            "1122" => &self.p1122,
            "1120" => &self.p1120,
            "1202" => &self.p1202,
            "1212" => &self.p1212,
            "0121" => &self.p0121,
            _ => return None,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &GSeries<R>)> {
        MOMENT_WORDS.iter().map(move |w| (*w, self.get(w).expect("listed moment")))
    }
}

fn word(s: &str) -> Word {
    Word::from_str(s).expect("static word")
}

/// Read every moment off the table, to `g^g_order`.
pub fn compute_moments<R: Ring>(amps: &impl Amplitudes<R>, g_order: usize) -> Result<MomentSet<R>> {
    if amps.max_order() < g_order {
        return Err(Error::InsufficientDepth {
            what: "moment set".into(),
            needed: g_order,
            available: amps.max_order(),
        });
    }
    let m = |w: &str| moment(amps, &word(w), g_order);
    Ok(MomentSet {
        p1: m("1")?,
        p11: m("11")?,
        p12: m("12")?,
        p112: m("112")?,
        p012: m("012")?,
        p1122: m("1122")?,
        p1120: m("1120")?,
        p1202: m("1202")?,
        p1212: m("1212")?,
        p0121: m("0121")?,
    })
}

/// Outcome of one moment recurrence: `lhs − rhs` and where it first fails.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport<R> {
    pub id: &'static str,
    pub text: &'static str,
    pub residual: GSeries<R>,
    /// First `g`-order with a nonzero residual, and its value.
    pub first_offending: Option<(usize, R)>,
}

impl<R> RecurrenceReport<R> {
    pub fn passed(&self) -> bool {
        self.first_offending.is_none()
    }
}

pub fn check_recurrences<R: Ring>(c: &R, m: &MomentSet<R>) -> Vec<RecurrenceReport<R>> {
    let k = |v: R| GSeries::constant(v);
    let g = GSeries::monomial(R::one(), 1);
    let d = k(crate::loopcat::c_poly(c, crate::loopcat::D_COEF));
    let one_minus_c = k(R::one() - c.clone());
    let gd = g.clone() * d.clone();
    let rows = [
        ("4.1", "g(1+c-2c^2) p11 = (1-c) p1", gd.clone() * m.p11.clone() - one_minus_c * m.p1.clone()),
        ("4.2", "p12 - g(1+c-2c^2) p112 = c p11", m.p12.clone() - gd * m.p112.clone() - k(c.clone()) * m.p11.clone()),
        (
            "4.3",
            "c(p1212 + p0121 - p1122 - p1120) = -(1+c-2c^2)(p12 - p1^2)",
            k(c.clone()) * (m.p1212.clone() + m.p0121.clone() - m.p1122.clone() - m.p1120.clone())
                + d * (m.p12.clone() - m.p1.clone() * m.p1.clone()),
        ),
    ];
    rows.into_iter()
        .map(|(id, text, residual)| {
            let first_offending = residual.coeffs().iter().enumerate().find(|(_, v)| !v.is_zero()).map(|(n, v)| (n, v.clone()));
            RecurrenceReport { id, text, residual, first_offending }
        })
        .collect()
}

/// Which trace word stands in for the fourth-order moment of `f0`: the
/// formula prints `p_{1,2,0,2}`, the accompanying list names `p_{1212}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentVariant {
    #[serde(rename = "1202")]
    P1202,
    #[serde(rename = "1212")]
    P1212,
}

impl MomentVariant {
    pub const ALL: [MomentVariant; 2] = [MomentVariant::P1202, MomentVariant::P1212];

    pub fn word(self) -> &'static str {
        match self {
            MomentVariant::P1202 => "1202",
            MomentVariant::P1212 => "1212",
        }
    }
}

impl FromStr for MomentVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1202" => Ok(MomentVariant::P1202),
            "1212" => Ok(MomentVariant::P1212),
            _ => Err(Error::Unknown { kind: "moment variant", name: s.into() }),
        }
    }
}

/// The constant term of the shift between `−xφ − g/x²` and `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shift {
    /// `+ 1/(1−c)`, as printed.
    Printed,
    /// `+ 1/((1−c) x)`, the form under which the curve holds.
    Corrected,
}

/// Coefficients `f0..f5` as printed, in the symbols `c, g, x, p1, p12,
/// p012, p1202`. Kept as text so each line can be proofread against the
/// source.
pub const F_TEXT: [&str; 6] = [
    // f0
    "-c^2*((c-1)^2*g*x^6*(4*(c-1)*(2*c+1)*g*(((-2*c^2+c+1)^3*g^2 + c*(c*(18*c+31)+9))*p12 \
     + (c-1)*c*(2*c+1)*g*(2*(c-1)*(2*c+1)*g*p1202 + (8*c+5)*p012)) \
     + 3*(-2*c^2+c+1)^4*g^3*p1^2 \
     + 2*p1*((3*c+2)*(-2*c^2+c+1)^3*g^2 + 2*c*(9 - 4*c*((c-10)*c - 9)))) \
     + (2*c+1)^2*((c-1)^4*c^2*g^4 - 6*(c-1)^3*c^2*g^3*x \
     + x^4*(-12*c^2 + (2*c+1)^2*(c-1)^6*g^4 - 6*c*(2*c+1)*(c-1)^3*g^2) \
     - (c-1)^2*x^6*((c-1)^2*(c*(c+8)+3)*g^2 + 12*c) \
     - 2*(c-1)^2*(2*c+1)*g*x^5*((2*c+1)*(c-1)^3*g^2 + 2*c) \
     + 4*(c-1)*c*g*x^3*(2*(2*c+1)*(c-1)^3*g^2 + c) \
     - (c-1)^2*c*g^2*x^2*(2*(c-1)^3*(2*c+1)*g^2 - 9*c)))",
    // f1
    "-2*(c-1)*c*(2*c+1)^2*x*((c-1)^3*(2*c+1)*g^2*x^5*(2*(c-1)*c*g*(2*(-2*c^2+c+1)*g*p012 - 3*(4*c+3)*p12) \
     + p1*((c-1)^3*(2*c*g+g)^2 - 9*c*(c+3))) \
     + 3*(c-1)^4*c^2*(2*c+1)*g^4 - 3*(c-1)^3*c^2*(7*c+4)*g^3*x \
     + x^4*(6*c^2*(2*c+1)*(c-1)^3*g^2 - 6*c^2*(c+1) + (2*c+1)^3*(c-1)^6*g^4) \
     + 3*(c-1)*c*g*x^3*((2*c+1)*(5*c+3)*(c-1)^3*g^2 + c*(13*c+5)) \
     - 2*(c-1)^2*c*g^2*x^2*(2*(c-1)^3*(2*c*g+g)^2 - 3*c) \
     + (c-1)^2*g*x^5*((c+1)*(c-1)^3*(2*c*g+g)^2 + c*(c*(7*c-18) - 13)))",
    // f2
    "-c*(-2*c^2+c+1)^2*x^2*(2*(c-1)^4*(2*c+1)^2*g^3*x^4*(4*(c-1)*(2*c+1)*g*p12 + (12*c+13)*p1) \
     + 2*x^4*((c-1)^3*(2*c+1)*(4*c*(2*c+5)+9)*g^2 - 6*c^2) \
     - (c-1)^2*g^2*x^2*(3*c*(c*(53*c+38)+5) - 10*(-2*c^2+c+1)^3*g^2) \
     + 13*(c-1)^4*c*(2*c+1)^2*g^4 - 4*(c-1)^3*c*(2*c+1)*(8*c+7)*g^3*x \
     + 2*(c-1)*g*x^3*(2*(c+2)*(c-1)^3*(2*c*g+g)^2 + c*(c*(43*c+52)+13)))",
    // f3
    "2*(c-1)^4*(2*c+1)^2*g*x^3*(2*(-2*c^2+c+1)^4*g^3*p1*x^3 + 6*c*(-2*c^2+c+1)^3*g^3 \
     + x^3*((c-1)^3*(2*c+1)^3*(3*c+2)*g^2 - c^2*(c*(12*c+31)+13)) \
     + (c-1)*(2*c+1)*g*x^2*(3*c*(c*(17*c+16)+3) - 2*(-2*c^2+c+1)^3*g^2) \
     - 3*c*(3*c-1)*(-2*c^2+c+1)^2*g^2*x)",
    // f4
    "-(-1+c)^6*g^2*(x+2*c*x)^4*(4*(1+c-2*c^2)^2*g^2 + 4*(-1+c)*(1+2*c)*(1+5*c)*g*x - c*(18+19*c)*x^2)",
    // f5
    "-4*(c-1)^8*g^3*(2*c*x+x)^6",
];

/// `f0..f5` with the moments substituted: exact polynomials in `x` with
/// `g`-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveCoefficients<R> {
    pub f: [XSeries<R>; 6],
}

/// Evaluate one coefficient text with the given symbol values.
fn eval_text<V: Ring>(text: &str, sym: &impl Fn(&str) -> Option<V>) -> Result<V> {
    Expr::parse(text)?.eval(sym)
}

pub fn build_curve<R: Ring>(c: &R, m: &MomentSet<R>, variant: MomentVariant) -> Result<CurveCoefficients<R>> {
    let g_order = m.p1.order();
    let sym = |s: &str| -> Option<XSeries<R>> {
        let k = |v: GSeries<R>| Some(XLaurent::constant(v));
        match s {
            "c" => k(GSeries::constant(c.clone())),
            "g" => k(GSeries::monomial(R::one(), 1)),
            "x" => Some(XLaurent::monomial(GSeries::one(), 1)),
            "p1" => k(m.p1.clone()),
            "p12" => k(m.p12.clone()),
            "p012" => k(m.p012.clone()),
            "p1202" => k(m.get(variant.word())?.clone()),
            _ => None,
        }
    };
    let mut f: Vec<XSeries<R>> = Vec::with_capacity(6);
    for text in F_TEXT {
        let fk = eval_text(text, &sym)?;
        f.push(match g_order {
            Some(n) => fk.map(|gs| gs.truncate(n)),
            None => fk,
        });
    }
    Ok(CurveCoefficients { f: f.try_into().expect("six coefficients") })
}

/// `y' = (1−c) y`, built from `φ`. Lowest exponent `−2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedResolvent<R> {
    pub shift: Shift,
    pub y: XSeries<R>,
}

pub fn shifted_resolvent<R: Ring>(c: &R, phi: &XSeries<R>, shift: Shift) -> ShiftedResolvent<R> {
    let one_minus_c = GSeries::constant(R::one() - c.clone());
    let g_order = phi.terms().next().and_then(|(_, gs)| gs.order());
    let g = match g_order {
        Some(n) => GSeries::monomial(R::one(), 1).truncate(n),
        None => GSeries::monomial(R::one(), 1),
    };
    let s = XLaurent::monomial(GSeries::one(), if shift == Shift::Corrected { -1 } else { 0 });
    let y = -(phi.shift(1).scale(&one_minus_c)) - XLaurent::monomial(g * one_minus_c, -2) + s;
    ShiftedResolvent { shift, y }
}

/// `Σ_k f_k (1−c)^(5−k) y'^k = (1−c)^5 Σ_k f_k y^k`, known through the
/// exponent the truncation of `y` allows.
pub fn quintic_residual<R: Ring>(c: &R, y: &ShiftedResolvent<R>, f: &CurveCoefficients<R>) -> XSeries<R> {
    let one_minus_c = GSeries::constant(R::one() - c.clone());
    let mut out = XLaurent::zero();
    let mut y_pow = XLaurent::one();
    for k in 0..6 {
        let weight = one_minus_c.pow(5 - k as u32);
        out += &(f.f[k].scale(&weight) * y_pow.clone());
        if k < 5 {
            y_pow *= &y.y;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveReport<R> {
    pub variant: MomentVariant,
    pub shift: Shift,
    pub truncation: LoopTruncation,
    /// Highest `x` exponent at which the residual is determined.
    pub known_through: i32,
    pub first_nonzero: Option<Nonzero<R>>,
}

impl<R> CurveReport<R> {
    pub fn passed(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

/// Moments and `φ` read off `amps`, with `φ` taken one order past
/// `t.x_order` so the residual is determined through `x^(t.x_order)`.
pub fn curve_residual<R: Ring>(
    c: &R,
    amps: &impl Amplitudes<R>,
    t: LoopTruncation,
    variant: MomentVariant,
    shift: Shift,
) -> Result<XSeries<R>> {
    let m = compute_moments(amps, t.g_order)?;
    let phi = phi_series(amps, &Word::EMPTY, 0, LoopTruncation::new(t.x_order + 1, t.g_order))?;
    let f = build_curve(c, &m, variant)?;
    Ok(quintic_residual(c, &shifted_resolvent(c, &phi, shift), &f))
}

/// Amplitudes the curve check reads.
pub fn curve_requests(t: LoopTruncation) -> std::collections::BTreeSet<(Word, usize)> {
    let rec = Recorder::new(t.g_order);
    let m: Result<MomentSet<i128>> = compute_moments(&rec, t.g_order);
    m.expect("recorder never fails");
    let p: Result<XSeries<i128>> = phi_series(&rec, &Word::EMPTY, 0, LoopTruncation::new(t.x_order + 1, t.g_order));
    p.expect("recorder never fails");
    rec.requests()
}

/// Solve what the curve needs and check every retained coefficient of the
/// residual, for each requested variant.
pub fn check_curve<R: Ring>(
    spec: &ModelSpec<R>,
    t: LoopTruncation,
    variants: &[MomentVariant],
    shift: Shift,
) -> Result<Vec<CurveReport<R>>> {
    let spec = ModelSpec { max_order: t.g_order, ..spec.clone() };
    let amps = AmplitudeMap::solve(&spec, curve_requests(t))?;
    check_curve_on(&spec.c, &amps, t, variants, shift)
}

pub fn check_curve_on<R: Ring>(
    c: &R,
    amps: &impl Amplitudes<R>,
    t: LoopTruncation,
    variants: &[MomentVariant],
    shift: Shift,
) -> Result<Vec<CurveReport<R>>> {
    variants
        .iter()
        .map(|&variant| {
            let r = curve_residual(c, amps, t, variant, shift)?;
            let known_through = r.high().expect("truncated residual");
            if known_through < t.x_order as i32 {
                return Err(Error::InsufficientDepth {
                    what: "quintic residual x-order".into(),
                    needed: t.x_order,
                    available: known_through.max(0) as usize,
                });
            }
            Ok(CurveReport { variant, shift, truncation: t, known_through, first_nonzero: first_nonzero(&r, t) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Poly;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type P = Poly<BigInt>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn generic_moments() -> MomentSet<P> {
        let s = |k: i64| GSeries::exact(vec![P::from_i64(k), P::from_i64(k + 1)]);
        MomentSet {
            p1: s(2),
            p11: s(3),
            p12: s(5),
            p112: s(7),
            p012: s(11),
            p1122: s(13),
            p1120: s(17),
            p1202: s(19),
            p1212: s(23),
            p0121: s(29),
        }
    }

    #[test]
    fn transcription_degrees() {
        let f = build_curve(&P::var(), &generic_moments(), MomentVariant::P1202).unwrap();
        let lows: Vec<_> = f.f.iter().map(|fk| fk.valuation().unwrap()).collect();
        let tops: Vec<_> = f.f.iter().map(|fk| fk.top().unwrap()).collect();
        assert_eq!(tops, vec![6; 6]);
        assert_eq!(lows, vec![0, 1, 2, 3, 4, 6]);
    }

    #[test]
    fn f5_expands_as_printed() {
        let c = P::var();
        let f = build_curve(&c, &generic_moments(), MomentVariant::P1202).unwrap();
        let cm1 = c.clone() - P::one();
        let two_c_plus_1 = P::from_i64(2) * c + P::one();
        let lead = P::from_i64(-4) * cm1.pow(8) * two_c_plus_1.pow(6);
        let expect = XLaurent::monomial(GSeries::monomial(lead, 3), 6);
        assert_eq!(f.f[5], expect);
        // overall powers of g: f5 ∝ g³, f4 ∝ g², f3 ∝ g
        for (k, v) in [(5, 3), (4, 2), (3, 1)] {
            assert!(f.f[k].terms().all(|(_, gs)| gs.valuation().unwrap() >= v), "f{k}");
        }
    }

    #[test]
    fn moments_at_leading_order() {
        let c = q(1, 4);
        let spec = ModelSpec::potts(c.clone(), 3, 0).unwrap();
        let table = AmplitudeMap::solve(&spec, curve_requests(LoopTruncation::new(2, 3))).unwrap();
        let m = compute_moments(&table, 3).unwrap();
        assert_eq!(m.p11.coeff(0), q(1, 1));
        assert_eq!(m.p12.coeff(0), c);
        assert!(m.p1.coeff(0) == q(0, 1));
        assert!(compute_moments(&table, 9).is_err());
        assert!(m.p1.coeff(1) != q(0, 1));
    }

    #[test]
    fn recurrences_hold_symbolically() {
        let spec = ModelSpec::potts(P::var(), 8, 4).unwrap();
        let rec = Recorder::new(8);
        let _: MomentSet<P> = compute_moments(&rec, 8).unwrap();
        let amps = AmplitudeMap::solve(&spec, rec.requests()).unwrap();
        let m = compute_moments(&amps, 8).unwrap();
        for r in check_recurrences(&P::var(), &m) {
            assert!(r.passed(), "{} fails: {:?}", r.id, r.first_offending);
        }
    }

    #[test]
    fn curve_vanishes_only_for_one_variant() {
        let t = LoopTruncation::new(6, 6);
        let spec = ModelSpec::potts(q(1, 4), 6, 0).unwrap();
        let reports = check_curve(&spec, t, &MomentVariant::ALL, Shift::Corrected).unwrap();
        assert!(reports[0].passed(), "{:?}", reports[0]);
        let miss = reports[1].first_nonzero.clone().expect("1212 should fail");
        assert_eq!((miss.x_power, miss.g_power), (6, 6));
        // (1-c)^5 times the uncleared coefficient 7263027/33554432
        assert_eq!(miss.value, q(7263027, 33554432) * q(243, 1024));
    }

    #[test]
    fn printed_shift_fails() {
        let t = LoopTruncation::new(4, 4);
        let spec = ModelSpec::potts(q(1, 4), 4, 0).unwrap();
        let r = check_curve(&spec, t, &[MomentVariant::P1202], Shift::Printed).unwrap();
        assert!(!r[0].passed());
    }

    #[test]
    fn decoupled_limit() {
        let t = LoopTruncation::new(6, 6);
        let spec = ModelSpec::potts(q(0, 1), 6, 0).unwrap();
        let r = check_curve(&spec, t, &[MomentVariant::P1202], Shift::Corrected).unwrap();
        assert!(r[0].passed());
    }

    #[test]
    fn perturbed_moment_is_detected() {
        let c = q(1, 5);
        let t = LoopTruncation::new(5, 5);
        let spec = ModelSpec::potts(c.clone(), 5, 0).unwrap();
        let amps = AmplitudeMap::solve(&spec, curve_requests(t)).unwrap();
        let mut m = compute_moments(&amps, 5).unwrap();
        let phi = phi_series(&amps, &Word::EMPTY, 0, LoopTruncation::new(6, 5)).unwrap();
        let y = shifted_resolvent(&c, &phi, Shift::Corrected);
        let clean = quintic_residual(&c, &y, &build_curve(&c, &m, MomentVariant::P1202).unwrap());
        assert!(first_nonzero(&clean, t).is_none());
        m.p1 += &GSeries::monomial(q(1, 1), 3);
        let bad = quintic_residual(&c, &y, &build_curve(&c, &m, MomentVariant::P1202).unwrap());
        assert!(first_nonzero(&bad, t).is_some());
    }
}
