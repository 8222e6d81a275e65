//! Planar Schwinger–Dyson identities from reparameterisations
//! `X_0 → X_0 + ε δX_0`, with `δX_0` a sum of words containing one
//! resolvent `R_r = 1/(z − X_r)`.
//!
//! At large N, with `x = 1/z` and `tr = Tr/N`:
//!
//! ```text
//! J = Σ_{δX = A X_0 B} tr A · tr B  +  Σ_{δX = A R_0 B} tr(A R_0) · tr(R_0 B)
//! K = tr(δX ∂S/∂X_0),   ∂S/∂X_0 = [(1+c) X_0 − c X_1 − c X_2]/D − g X_0²
//! ```
//!
//! The identity is `J = K`. A trace with resolvents expands as
//! `tr(A R_r^(k) ...) = Σ x^(k+1) p[A r^k ...]`.

use rayon::prelude::*;

use super::catalog::{equation, loop_residual, Form};
use super::{c_poly, first_nonzero, LoopTruncation, Nonzero, XSeries, D_COEF};
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::ring::{GSeries, Ring, XLaurent};
use crate::solver::{AmplitudeMap, Amplitudes, ModelSpec, Recorder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Letter(u8),
    Resolvent(u8),
}

/// One reparameterisation `δX_0`, and the loop equation it reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Descriptor {
    /// 1-based position in the list.
    pub index: usize,
    /// `δX_0` as a sum of words: `X<i>`, `X<i>^k`, `R<i>`.
    pub text: &'static str,
    pub pairs_with: &'static str,
}

const VARIED: u8 = 0;

macro_rules! d {
    ($i:literal, $text:literal, $eq:literal) => {
        Descriptor { index: $i, text: $text, pairs_with: $eq }
    };
}

const DESCRIPTORS: &[Descriptor] = &[
    d!(1, "R0", "3.6"),
    d!(2, "X1 R0 X1", "3.7"),
    d!(3, "X1 R0 + R0 X1", "3.8"),
    d!(4, "X2 X1 R0 + R0 X1 X2", "3.9"),
    d!(5, "X1 X2 X1 R0 + R0 X1 X2 X1", "3.11"),
    d!(6, "X1 X0 X2 R0 + R0 X2 X0 X1", "3.12"),
    d!(7, "X1 X0 X1 R0 + R0 X1 X0 X1", "3.13"),
    d!(8, "X0 X1 X2 R0 + R0 X2 X1 X0", "3.14"),
    d!(9, "X1 X2 R0 X0 + X0 R0 X2 X1", "3.15"),
    d!(10, "R2", "3.16"),
    d!(11, "X1 R2 X1", "3.17"),
    d!(12, "X1 R2 + R2 X1", "3.18"),
    d!(13, "R2 X0 + X0 R2", "3.19"),
    d!(14, "R2 X1^2 + X1^2 R2", "3.20"),
    d!(15, "X2 X1 R2 + R2 X1 X2", "3.21"),
    d!(16, "X2 X0 R2 + R2 X0 X2", "3.22"),
    d!(17, "X1 X0 R2 + R2 X0 X1", "3.23"),
    d!(18, "X0 X1 R2 X0 + X0 R2 X1 X0", "3.24"),
    d!(19, "X1 R2 X0^2 + X0^2 R2 X1", "3.25"),
    d!(20, "X0 R2 X0 X2 + X2 X0 R2 X0", "3.26"),
    d!(21, "R2 X0 X2 X0 + X0 X2 X0 R2", "3.27"),
    d!(22, "X0 R2 X1 X0 + X0 X1 R2 X0", "3.28"),
    d!(23, "X0^2 X1 R2 + R2 X1 X0^2", "3.29"),
];

pub fn descriptors() -> &'static [Descriptor] {
    DESCRIPTORS
}

pub fn descriptor(index: usize) -> Result<&'static Descriptor> {
    DESCRIPTORS
        .iter()
        .find(|d| d.index == index)
        .ok_or_else(|| Error::Unknown { kind: "descriptor", name: index.to_string() })
}

impl Descriptor {
    pub fn terms(&self) -> Result<Vec<Vec<Item>>> {
        let bad = |why: &str| Error::Invalid(format!("descriptor {:?}: {why}", self.text));
        let mut out = Vec::new();
        for term in self.text.split(" + ") {
            let mut items = Vec::new();
            for tok in term.split_whitespace() {
                let (head, power) = match tok.split_once('^') {
                    Some((h, p)) => (h, p.parse::<usize>().map_err(|_| bad("bad power"))?),
                    None => (tok, 1),
                };
                let mut ch = head.chars();
                let kind = ch.next();
                let letter = ch.as_str().parse::<u8>().ok().filter(|&l| l < 3).ok_or_else(|| bad("bad letter"))?;
                match kind {
                    Some('X') => items.extend(std::iter::repeat(Item::Letter(letter)).take(power)),
                    Some('R') if power == 1 => items.push(Item::Resolvent(letter)),
                    _ => return Err(bad("bad token")),
                }
            }
            if items.iter().filter(|i| matches!(i, Item::Resolvent(_))).count() != 1 {
                return Err(bad("each term needs exactly one resolvent"));
            }
            out.push(items);
        }
        Ok(out)
    }
}

/// `tr(items)` as a series in `x`, known through `x^high`.
fn trace<R: Ring>(items: &[Item], amps: &impl Amplitudes<R>, high: usize, g_order: usize) -> Result<XSeries<R>> {
    let slots: Vec<usize> = items.iter().enumerate().filter(|(_, i)| matches!(i, Item::Resolvent(_))).map(|(k, _)| k).collect();
    let word_for = |powers: &[usize]| -> Word {
        let mut letters = Vec::new();
        let mut next = 0;
        for it in items {
            match *it {
                Item::Letter(l) => letters.push(l),
                Item::Resolvent(r) => {
                    letters.extend(std::iter::repeat(r).take(powers[next]));
                    next += 1;
                }
            }
        }
        Word::from_letters(&letters)
    };
    let m = slots.len();
    if m == 0 {
        return Ok(XLaurent::constant(super::moment(amps, &word_for(&[]), g_order)?));
    }
    let mut coeffs = vec![GSeries::zero_to(g_order); high + 1];
    // every split of the x-power among the resolvents, each taking k+1
    let mut powers = vec![0usize; m];
    loop {
        let e: usize = powers.iter().map(|k| k + 1).sum();
        if e <= high {
            coeffs[e] += &super::moment(amps, &word_for(&powers), g_order)?;
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(XLaurent::new(0, coeffs, Some(high as i32)));
            }
            powers[i] += 1;
            if powers.iter().map(|k| k + 1).sum::<usize>() <= high {
                break;
            }
            powers[i] = 0;
            i += 1;
        }
    }
}

/// `D · (J − K)` for the descriptor, through `x^(x_order + 1)`; vanishes
/// identically on true amplitudes.
pub fn sd_residual<R: Ring>(
    desc: &Descriptor,
    c: &R,
    amps: &impl Amplitudes<R>,
    t: LoopTruncation,
) -> Result<XSeries<R>> {
    let high = t.x_order + 1;
    let n = t.g_order;
    let scalar = |k: R| XLaurent::constant(GSeries::constant(k));
    let d = c_poly(c, D_COEF);
    let mut acc = XLaurent::zero_to(high as i32);
    for items in desc.terms()? {
        // Jacobian: split at every X_0 and at a resolvent of X_0
        let mut jac = XLaurent::zero_to(high as i32);
        for (p, it) in items.iter().enumerate() {
            match *it {
                Item::Letter(VARIED) => {
                    jac += &(trace(&items[..p], amps, high, n)? * trace(&items[p + 1..], amps, high, n)?);
                }
                Item::Resolvent(VARIED) => {
                    jac += &(trace(&items[..=p], amps, high, n)? * trace(&items[p..], amps, high, n)?);
                }
                _ => {}
            }
        }
        acc += &(jac * scalar(d.clone())).truncate(high as i32);
        // action: D ∂S/∂X_0 = (1+c) X_0 − c X_1 − c X_2 − D g X_0²
        let with = |extra: &[u8]| -> Result<XSeries<R>> {
            let mut v = items.clone();
            v.extend(extra.iter().map(|&l| Item::Letter(l)));
            trace(&v, amps, high, n)
        };
        acc -= &(with(&[0])? * scalar(R::one() + c.clone()));
        acc += &(with(&[1])? * scalar(c.clone()));
        acc += &(with(&[2])? * scalar(c.clone()));
        let g = XLaurent::constant(GSeries::monomial(d.clone(), 1));
        acc += &(with(&[0, 0])? * g).truncate(high as i32);
    }
    Ok(acc)
}

/// The descriptor's identity rewritten in loop-equation normalization:
/// `−(2/terms) · D(J − K) / x`, directly comparable with `loop_residual`.
pub fn sd_loop_form<R: Ring>(
    desc: &Descriptor,
    c: &R,
    amps: &impl Amplitudes<R>,
    t: LoopTruncation,
) -> Result<XSeries<R>> {
    let terms = desc.terms()?.len() as i64;
    if 2 % terms != 0 {
        return Err(Error::Invalid(format!("descriptor {} has {terms} terms", desc.index)));
    }
    let s = sd_residual(desc, c, amps, t)?;
    let lead = s.coeff(0);
    if !lead.is_zero_series() {
        return Err(Error::Invalid(format!("descriptor {}: nonzero x^0 part", desc.index)));
    }
    Ok(s.shift(-1).scale(&GSeries::constant(R::from_i64(-2 / terms))).truncate(t.x_order as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdReport<R> {
    pub index: usize,
    pub pairs_with: &'static str,
    /// First nonzero coefficient of the identity on the solved amplitudes.
    pub residual: Option<Nonzero<R>>,
    /// First coefficient where the identity differs from the cataloged
    /// equation, both evaluated on generic symmetric amplitudes.
    pub formal_mismatch: Option<Nonzero<R>>,
}

impl<R> SdReport<R> {
    pub fn passed(&self) -> bool {
        self.residual.is_none() && self.formal_mismatch.is_none()
    }
}

/// Residual of every descriptor on the solved amplitudes, and its formal
/// comparison with the paired catalog entry (corrected form where one
/// exists).
pub fn check_descriptors<R: Ring>(
    spec: &ModelSpec<R>,
    descs: &[&Descriptor],
    t: LoopTruncation,
) -> Result<Vec<SdReport<R>>> {
    let recorder = Recorder::new(t.g_order);
    for d in descs {
        sd_residual(d, &spec.c, &recorder, t)?;
    }
    let spec = ModelSpec { max_order: t.g_order, ..spec.clone() };
    let amps = AmplitudeMap::solve(&spec, recorder.requests())?;
    let generic = super::GenericTable { max_order: t.g_order, seed: 0x5eed };
    descs
        .par_iter()
        .map(|d| {
            let residual = first_nonzero(&sd_residual(d, &spec.c, &amps, t)?, LoopTruncation::new(t.x_order + 1, t.g_order));
            let eq = equation(d.pairs_with, Form::Erratum).or_else(|_| equation(d.pairs_with, Form::Printed))?;
            let diff = sd_loop_form(d, &spec.c, &generic, t)? - loop_residual(eq, &spec.c, &generic, t)?;
            Ok(SdReport { index: d.index, pairs_with: d.pairs_with, residual, formal_mismatch: first_nonzero(&diff, t) })
        })
        .collect()
}
