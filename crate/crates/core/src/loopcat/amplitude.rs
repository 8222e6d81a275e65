use std::hash::{Hash, Hasher};

use rustc_hash::FxHasher;

use super::{LoopTruncation, XSeries};
use crate::error::Result;
use crate::freealg::Word;
use crate::ring::{Field, GSeries, Ring, XLaurent};
use crate::solver::Amplitudes;

/// `φ_label` (or a `Δ0` shift of it) as a series in `x0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeSeries<R> {
    pub label: Word,
    pub shift: usize,
    pub symmetrized: bool,
    pub series: XSeries<R>,
}

/// The constant `p[w]` as a `g`-series.
pub fn moment<R: Ring>(amps: &impl Amplitudes<R>, w: &Word, g_order: usize) -> Result<GSeries<R>> {
    let coeffs = (0..=g_order).map(|n| amps.amplitude(w, n)).collect::<Result<Vec<R>>>()?;
    Ok(GSeries::truncated(coeffs, g_order))
}

/// `Δ0^shift φ_label = Σ_k x0^k p[label 0^(k+shift)]`.
pub fn phi_series<R: Ring>(amps: &impl Amplitudes<R>, label: &Word, shift: usize, t: LoopTruncation) -> Result<XSeries<R>> {
    let coeffs = (0..=t.x_order)
        .map(|k| moment(amps, &label.concat(&Word::letter_repeat(0, k + shift)), t.g_order))
        .collect::<Result<Vec<_>>>()?;
    Ok(XLaurent::new(0, coeffs, Some(t.x_order as i32)))
}

pub fn extract_amplitude<R: Ring>(
    amps: &impl Amplitudes<R>,
    label: &Word,
    shift: usize,
    t: LoopTruncation,
) -> Result<AmplitudeSeries<R>> {
    Ok(AmplitudeSeries { label: *label, shift, symmetrized: false, series: phi_series(amps, label, shift, t)? })
}

/// `φ_(w) = (φ_w + φ_w̄)/2`, averaging a label with its reverse.
pub fn extract_symmetrized<K: Field>(
    amps: &impl Amplitudes<K>,
    label: &Word,
    shift: usize,
    t: LoopTruncation,
) -> Result<AmplitudeSeries<K>> {
    let sum = phi_series(amps, label, shift, t)? + phi_series(amps, &label.reverse(), shift, t)?;
    let half = GSeries::constant(K::from_ratio(1, 2));
    Ok(AmplitudeSeries { label: *label, shift, symmetrized: true, series: sum.scale(&half) })
}

/// Arbitrary amplitudes with only the symmetries of the model built in:
/// invariant under rotation, reversal and spin relabelling, `p[ε] = 1`.
/// Identities that hold here hold as formal identities between amplitude
/// symbols, not by accident of the solution.
#[derive(Clone, Copy, Debug)]
pub struct GenericTable {
    pub max_order: usize,
    pub seed: u64,
}

impl<R: Ring> Amplitudes<R> for GenericTable {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R> {
        if w.is_empty() {
            return Ok(if n == 0 { R::one() } else { R::zero() });
        }
        let mut h = FxHasher::default();
        (self.seed, w.canonical(), n).hash(&mut h);
        Ok(R::from_i64(((h.finish() >> 29) % 19) as i64 - 9))
    }

    fn max_order(&self) -> usize {
        self.max_order
    }
}
