//! Loop equations in the resolvent variable `x0`.
//!
//! Everything here is a truncated series in `x0` (the resolvent block) whose
//! coefficients are truncated series in `g`, read off a table of disk
//! amplitudes. Mixed amplitudes are labelled by full words over `{0,1,2}`:
//!
//! ```text
//! φ_w(x0) = Σ_k x0^k p[w 0^k],     Δ0^s φ_w = Σ_k x0^k p[w 0^(k+s)]
//! ```
//!
//! The catalog is data (one line of text per equation); the Schwinger–Dyson
//! generator derives the same equations from matrix reparameterisations.

mod amplitude;
mod catalog;
mod sd;


use crate::ring::{GSeries, Ring, XLaurent};

pub use amplitude::{extract_amplitude, extract_symmetrized, moment, phi_series, AmplitudeSeries, GenericTable};
pub use catalog::{
    acceptance_equations, catalog, check_catalog, equation, loop_residual, Form, LoopEquation, LoopReport, Monomial,
    Factor,
};
pub use sd::{check_descriptors, descriptor, descriptors, sd_loop_form, sd_residual, Descriptor, Item, SdReport};

/// Series in `x0` with `g`-series coefficients.
pub type XSeries<R> = XLaurent<GSeries<R>>;

/// Orders kept in `x0` and in `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LoopTruncation {
    pub x_order: usize,
    pub g_order: usize,
}

impl LoopTruncation {
    pub fn new(x_order: usize, g_order: usize) -> Self {
        LoopTruncation { x_order, g_order }
    }
}

/// A coefficient `x0^x_power g^g_power` that should have vanished.
#[derive(Clone, Debug, PartialEq)]
pub struct Nonzero<R> {
    pub x_power: i32,
    pub g_power: usize,
    pub value: R,
}

/// Lowest nonzero coefficient (by `x0` power, then `g` power) within the
/// truncation, if any.
pub fn first_nonzero<R: Ring>(s: &XSeries<R>, t: LoopTruncation) -> Option<Nonzero<R>> {
    s.terms()
        .filter(|(e, _)| *e <= t.x_order as i32)
        .find_map(|(e, gs)| {
            gs.coeffs()
                .iter()
                .enumerate()
                .take(t.g_order + 1)
                .find(|(_, v)| !v.is_zero())
                .map(|(n, v)| Nonzero { x_power: e, g_power: n, value: v.clone() })
        })
}

/// `a + b c + d c²` for small integer coefficients.
pub(crate) fn c_poly<R: Ring>(c: &R, coef: [i64; 3]) -> R {
    let mut r = R::from_i64(coef[0]);
    if coef[1] != 0 {
        r += &c.mul_ref(&R::from_i64(coef[1]));
    }
    if coef[2] != 0 {
        r += &c.mul_ref(c).mul_ref(&R::from_i64(coef[2]));
    }
    r
}

/// `D = 1 + c − 2c²`.
pub(crate) const D_COEF: [i64; 3] = [1, 1, -2];
