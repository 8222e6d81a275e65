use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{grade, recursion_step, ModelSpec};
use crate::error::{Error, Result};
use crate::freealg::{NCSeries, Truncation, Word, MAX_WORD_LEN};
use crate::ring::{GSeries, Ring};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Nonzero coefficients stored.
    pub entries: usize,
    /// Reads of a coefficient whose grade was not strictly lower than the
    /// one being solved. Always zero; kept as a checked invariant.
    pub non_decreasing_reads: usize,
}

/// Every coefficient of `Φ` of grade at most `grade_reached` (and within the
/// length/order bounds of `phi.trunc()`).
#[derive(Clone, Debug)]
pub struct SolutionTable<R: Ring> {
    pub spec: ModelSpec<R>,
    pub phi: NCSeries<R>,
    pub grade_reached: usize,
    pub stats: SolveStats,
}

impl<R: Ring> SolutionTable<R> {
    /// The table restricted to the reported word length.
    pub fn reported(&self) -> NCSeries<R> {
        self.phi.restrict(&Truncation::new(self.spec.max_len, self.spec.max_order))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Sync) -> SolutionTable<S> {
        SolutionTable {
            spec: ModelSpec {
                kind: self.spec.kind,
                c: f(&self.spec.c),
                max_order: self.spec.max_order,
                max_len: self.spec.max_len,
            },
            phi: self.phi.map(f),
            grade_reached: self.grade_reached,
            stats: self.stats,
        }
    }
}

/// Solve to every grade `|w| + 2n <= max_len + 2 max_order`; this is the
/// closure needed so that words up to `max_len` are known to `g^max_order`.
pub fn solve_series<R: Ring>(spec: &ModelSpec<R>) -> Result<SolutionTable<R>> {
    solve_to(spec, spec.max_len + 2 * spec.max_order)
}

/// Solve every coefficient with `|w| + 2n <= max_grade` and `n <= max_order`;
/// this set is closed under the recursion.
pub fn solve_to<R: Ring>(spec: &ModelSpec<R>, max_grade: usize) -> Result<SolutionTable<R>> {
    if max_grade > MAX_WORD_LEN {
        return Err(Error::InsufficientDepth {
            what: "word length".into(),
            needed: max_grade,
            available: MAX_WORD_LEN,
        });
    }
    let trunc = Truncation::graded(max_grade, spec.max_order, max_grade);
    let alphabet = spec.alphabet();
    let mut table: HashMap<Word, Vec<R>> = HashMap::new();
    let violations = AtomicUsize::new(0);

    for g in 0..=max_grade {
        let mut batch: Vec<(Word, usize)> = Vec::new();
        for n in 0..=spec.max_order.min(g / 2) {
            let len = g - 2 * n;
            match spec.kind {
                super::ModelKind::PureGravity => batch.push((Word::letter_repeat(0, len), n)),
                super::ModelKind::Potts3 => batch.extend(Word::all_of_len(len).map(|w| (w, n))),
            }
        }
        let solved: Vec<(Word, usize, R)> = batch
            .par_iter()
            .map(|&(w, n)| {
                let get = |u: Word, m: usize| -> Option<&R> {
                    if grade(&u, m) >= g {
                        violations.fetch_add(1, Ordering::Relaxed);
                    }
                    table.get(&u).and_then(|v| v.get(m)).filter(|x| !x.is_zero())
                };
                (w, n, recursion_step(&spec.c, alphabet, w, n, &get))
            })
            .filter(|(_, _, v)| !v.is_zero())
            .collect();
        for (w, n, v) in solved {
            let slot = table.entry(w).or_default();
            if slot.len() <= n {
                slot.resize(n + 1, R::zero());
            }
            slot[n] = v;
        }
    }

    let mut phi = NCSeries::zero(trunc);
    let mut entries = 0;
    for (w, coeffs) in table {
        entries += coeffs.iter().filter(|c| !c.is_zero()).count();
        phi.insert(w, GSeries::new(coeffs, None));
    }
    Ok(SolutionTable {
        spec: spec.clone(),
        phi,
        grade_reached: max_grade,
        stats: SolveStats { entries, non_decreasing_reads: violations.into_inner() },
    })
}
