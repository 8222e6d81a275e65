use rayon::prelude::*;

use super::amplitude::{moment, phi_series};
use super::{c_poly, first_nonzero, LoopTruncation, Nonzero, XSeries};
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::ring::{GSeries, Ring, XLaurent};
use crate::solver::{AmplitudeMap, Amplitudes, ModelSpec, Recorder};

/// Which transcription of an equation this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    /// As printed.
    Printed,
    /// Corrected: the printed form does not vanish on the solved amplitudes.
    Erratum,
}

/// One loop equation, written as text in the notation below.
///
/// Terms are separated by ` + ` / ` - `; each term is an optional
/// coefficient (`2`, `c`, `2c`, `(1+c)`, `D` = 1+c−2c², `2D`) followed by
/// factors: `x0`, `g`, `p<w>` (a constant amplitude), `phi<w>` and the
/// symmetrised `phi(<w>)`, each optionally preceded by `D0` or `D0^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopEquation {
    pub id: &'static str,
    /// The expansion string the equation is labelled by.
    pub template: &'static str,
    pub form: Form,
    pub text: &'static str,
}

macro_rules! eq {
    ($id:literal, $template:literal, $text:literal) => {
        eq!($id, $template, Printed, $text)
    };
    ($id:literal, $template:literal, $form:ident, $text:literal) => {
        LoopEquation { id: $id, template: $template, form: Form::$form, text: $text }
    };
}

// The restriction of the row-0 equation to `x1 = x2 = 0` keeps φ1 and φ2
// apart; every other entry uses spin symmetry to write φ2 as φ1.
const CATALOG: &[LoopEquation] = &[
    eq!("3.1", "Δ0Φ row at x1=x2=0", "(1+c) D0 phi - D x0 phi phi - D g D0^2 phi = c phi1 + c phi2"),
    eq!("3.6", "x0···x0", "(1+c) D0 phi - D x0 phi phi - D g D0^2 phi = 2c phi1"),
    eq!("3.7", "x1x0···x0x1", "(1+c) phi101 - D x0 phi1 phi1 - D g phi1001 = c phi111 + c phi121"),
    eq!("3.8", "x1x0···", "(1+c) D0 phi1 - D x0 phi phi1 - D g D0^2 phi1 = c phi11 + c phi12"),
    eq!("3.9", "x2x1x0···", "(1+c) D0 phi12 - D x0 phi phi12 - D g D0^2 phi12 = c phi121 + c phi(122)"),
    eq!("3.11", "x1x2x1x0···", "(1+c) D0 phi121 - D x0 phi phi121 - D g D0^2 phi121 = c phi1212 + c phi(1121)"),
    eq!(
        "3.12",
        "x1x0x2x0···",
        "(1+c) D0 phi102 - D x0 phi phi102 - D p1 phi1 - D g D0^2 phi102 = c phi(1102) + c phi(1201)"
    ),
    eq!(
        "3.13",
        "x1x0x1x0···",
        "(1+c) D0 phi101 - D x0 phi phi101 - D p1 phi1 - D g D0^2 phi101 = c phi(1101) + c phi(1202)"
    ),
    eq!(
        "3.14",
        "x0x1x2x0···",
        "(1+c) D0^2 phi12 - D x0 phi D0 phi12 - D phi12 - D g D0^3 phi12 = c phi(1201) + c phi(1202)"
    ),
    eq!(
        "3.15",
        "x1x2x0···x0",
        "(1+c) D0^2 phi12 - D x0 D0 phi phi12 - D phi12 - D g D0^3 phi12 = c D0 phi(112) + c D0 phi121"
    ),
    eq!("3.16", "x2···x2", "phi1 - D g phi11 = c D0 phi"),
    eq!("3.17", "x1x2···x2x1", "(1+c) phi121 - D g phi1221 = c phi111 + c phi101"),
    eq!("3.18", "x1x2···", "(1+c) phi12 - D g phi(112) = c phi11 + c D0 phi1"),
    eq!("3.19", "x0x2···", "(1+c) phi11 - D phi - D g phi111 = c phi12 + c D0 phi1"),
    eq!("3.20", "x1x1x2···", "(1+c) phi(112) - D g phi1122 = c phi111 + c D0 phi11"),
    eq!("3.21", "x2x1x2···", "(1+c) phi102 - D g phi(1102) = c phi101 + c D0^2 phi1"),
    eq!("3.22", "x2x0x2···", "(1+c) phi101 - D p1 phi - D g phi(1101) = c phi102 + c D0^2 phi1"),
    eq!("3.23", "x1x0x2···", "(1+c) phi121 - D p1 phi - D g phi(1121) = c phi(112) + c D0 phi12"),
    eq!("3.24", "x0x1x2···x2x0", "(1+c) phi(1222) - 2D phi12 - D g phi(12222) = c phi1212 + c phi(1202)"),
    eq!(
        "3.25",
        "x1x2···x2x0x0",
        "(1+c) phi(1222) - D phi12 - D p1 phi1 - D g phi(12222) = c phi1122 + c phi(1102)"
    ),
    eq!(
        "3.26",
        "x0x2···x2x0x2",
        "(1+c) phi(1211) - D phi12 - D p1 phi1 - D g phi(12111) = c phi1001 + c phi(1201)"
    ),
    // the template puts x0 where the print has x2: 1211 → 1011, 12 → Δ0 1
    eq!(
        "3.26",
        "x0x2···x2x0x2",
        Erratum,
        "(1+c) phi(1011) - D D0 phi1 - D p1 phi1 - D g phi(10111) = c phi1001 + c phi(1201)"
    ),
    eq!(
        "3.27",
        "x0x2x0x2···",
        "(1+c) phi(1211) - D phi12 - D p12 phi - D g phi(12111) = c phi(1202) + c D0 phi101"
    ),
    eq!(
        "3.27",
        "x0x2x0x2···",
        Erratum,
        "(1+c) phi(1011) - D D0 phi1 - D p12 phi - D g phi(10111) = c phi(1202) + c D0 phi101"
    ),
    eq!("3.28", "x0x2···x2x1x0", "(1+c) phi(1222) - 2D phi12 - D g phi(12222) = c phi1212 + c phi(1202)"),
    eq!(
        "3.29",
        "x0x0x1x2···",
        "(1+c) phi(1222) - D phi12 - D p1 phi1 - D g phi(12222) = c phi1221 + c D0 phi(112)"
    ),
];

/// Every transcription, printed and corrected.
pub fn catalog() -> &'static [LoopEquation] {
    CATALOG
}

/// The 24 equations held to vanish: the row-0 restriction and 23 loop
/// equations, using the corrected form where the printed one fails.
pub fn acceptance_equations() -> Vec<&'static LoopEquation> {
    let mut out: Vec<&'static LoopEquation> = Vec::new();
    for e in CATALOG {
        match out.iter().position(|o| o.id == e.id) {
            Some(i) if e.form == Form::Erratum => out[i] = e,
            Some(_) => {}
            None => out.push(e),
        }
    }
    out
}

pub fn equation(id: &str, form: Form) -> Result<&'static LoopEquation> {
    CATALOG
        .iter()
        .find(|e| e.id == id && e.form == form)
        .ok_or_else(|| Error::Unknown { kind: "loop equation", name: format!("{id} ({form:?})") })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Phi { label: Word, shift: usize, symmetrized: bool },
    /// A constant amplitude `p[w]`.
    Moment(Word),
}

/// `± coef · x0^x0 · g^g · Π factors`, `coef` as `[a, b, d]` = a + b c + d c².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coef: [i64; 3],
    pub x0: u32,
    pub g: u32,
    pub factors: Vec<Factor>,
}

fn parse_error(text: &str, why: &str) -> Error {
    Error::Invalid(format!("loop equation text {text:?}: {why}"))
}

fn parse_side(text: &str, side: &str) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut sign = 1i64;
    let mut current: Option<Monomial> = None;
    let mut pending_shift = 0usize;
    let fresh = |sign: i64| Monomial { coef: [sign, 0, 0], x0: 0, g: 0, factors: Vec::new() };
    for tok in side.split_whitespace() {
        match tok {
            "+" | "-" => {
                out.extend(current.take());
                sign = if tok == "-" { -1 } else { 1 };
                continue;
            }
            _ => {}
        }
        let m = current.get_or_insert_with(|| fresh(sign));
        let coef = match tok {
            "2" => Some([2, 0, 0]),
            "c" => Some([0, 1, 0]),
            "2c" => Some([0, 2, 0]),
            "(1+c)" => Some([1, 1, 0]),
            "D" => Some([1, 1, -2]),
            "2D" => Some([2, 2, -4]),
            _ => None,
        };
        if let Some(k) = coef {
            if m.coef != [sign, 0, 0] || !m.factors.is_empty() {
                return Err(parse_error(text, "coefficient must lead its term"));
            }
            m.coef = k.map(|a| a * sign);
            continue;
        }
        if tok == "x0" {
            m.x0 += 1;
        } else if tok == "g" {
            m.g += 1;
        } else if let Some(k) = tok.strip_prefix("D0") {
            pending_shift = match k.strip_prefix('^') {
                Some(e) => e.parse().map_err(|_| parse_error(text, "bad D0 power"))?,
                None if k.is_empty() => 1,
                None => return Err(parse_error(text, "bad D0 token")),
            };
            continue;
        } else if let Some(rest) = tok.strip_prefix("phi") {
            let (label, symmetrized) = match rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                Some(inner) => (inner, true),
                None => (rest, false),
            };
            let label: Word = label.parse().map_err(|_| parse_error(text, "bad label"))?;
            m.factors.push(Factor::Phi { label, shift: pending_shift, symmetrized });
            pending_shift = 0;
            continue;
        } else if let Some(rest) = tok.strip_prefix('p') {
            let w: Word = rest.parse().map_err(|_| parse_error(text, "bad moment"))?;
            m.factors.push(Factor::Moment(w));
        } else {
            return Err(parse_error(text, &format!("unknown token {tok}")));
        }
        if pending_shift != 0 {
            return Err(parse_error(text, "D0 must precede a phi"));
        }
    }
    out.extend(current);
    if pending_shift != 0 {
        return Err(parse_error(text, "dangling D0"));
    }
    Ok(out)
}

impl LoopEquation {
    /// `(left, right)` monomials.
    pub fn parse(&self) -> Result<(Vec<Monomial>, Vec<Monomial>)> {
        let (l, r) = self.text.split_once('=').ok_or_else(|| parse_error(self.text, "missing '='"))?;
        Ok((parse_side(self.text, l)?, parse_side(self.text, r)?))
    }
}

/// `2 · (LHS − RHS)`: the factor two clears the halves of the
/// symmetrised amplitudes, so the residual stays in the coefficient ring.
pub fn loop_residual<R: Ring>(
    eq: &LoopEquation,
    c: &R,
    amps: &impl Amplitudes<R>,
    t: LoopTruncation,
) -> Result<XSeries<R>> {
    let (lhs, rhs) = eq.parse()?;
    let mut acc = XLaurent::zero_to(t.x_order as i32);
    for (m, sign) in lhs.iter().map(|m| (m, 1)).chain(rhs.iter().map(|m| (m, -1))) {
        let halves = m.factors.iter().filter(|f| matches!(f, Factor::Phi { symmetrized: true, .. })).count();
        if halves > 1 {
            return Err(parse_error(eq.text, "at most one symmetrised factor per term"));
        }
        let k = sign * if halves == 1 { 1 } else { 2 };
        let coef = c_poly(c, m.coef.map(|a| a * k));
        let mut term = XLaurent::monomial(GSeries::monomial(coef, m.g as usize), m.x0 as i32);
        for f in &m.factors {
            let s = match f {
                Factor::Moment(w) => XLaurent::constant(moment(amps, w, t.g_order)?),
                Factor::Phi { label, shift, symmetrized } => {
                    let s = phi_series(amps, label, *shift, t)?;
                    if *symmetrized {
                        s + phi_series(amps, &label.reverse(), *shift, t)?
                    } else {
                        s
                    }
                }
            };
            term = term * s;
        }
        acc += &term.truncate(t.x_order as i32);
    }
    Ok(acc)
}

/// Outcome of one catalog residual.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopReport<R> {
    pub id: &'static str,
    pub form: Form,
    pub first_nonzero: Option<Nonzero<R>>,
}

impl<R> LoopReport<R> {
    pub fn passed(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

/// Solve exactly the amplitudes the given equations read, then evaluate
/// every residual.
pub fn check_catalog<R: Ring>(
    spec: &ModelSpec<R>,
    eqs: &[&LoopEquation],
    t: LoopTruncation,
) -> Result<Vec<LoopReport<R>>> {
    let recorder = Recorder::new(t.g_order);
    for e in eqs {
        loop_residual(e, &spec.c, &recorder, t)?;
    }
    let spec = ModelSpec { max_order: t.g_order, ..spec.clone() };
    let amps = AmplitudeMap::solve(&spec, recorder.requests())?;
    eqs.par_iter()
        .map(|e| {
            let r = loop_residual(e, &spec.c, &amps, t)?;
            Ok(LoopReport { id: e.id, form: e.form, first_nonzero: first_nonzero(&r, t) })
        })
        .collect()
}
