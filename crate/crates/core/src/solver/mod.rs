//! Disk amplitudes from the generating equation.
//!
//! Removing the marked boundary edge of a disk either pinches off two smaller
//! disks (the matched letter `b` sits somewhere in the rest of the word) or
//! exposes a triangle, which adds two letters and costs a power of `g`:
//!
//! ```text
//! p[aW](n) = Σ_b G_ab Σ_{W = U b V} Σ_m p[U](m) p[V](n-m) + Σ_j G_aj p[jjW](n-1)
//! ```
//!
//! with `G_aa = 1`, `G_ab = c`. Both moves strictly lower the grade
//! `|w| + 2n`, so the table is filled grade by grade.

mod full;
mod gravity;
mod residual;
mod sparse;


use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::ring::Ring;

pub use full::{solve_series, SolutionTable, SolveStats};
pub use gravity::{solve_pure_gravity, GravityBranch, PureGravityCheck};
pub use residual::{build_rhs_potts, eq31_residual, generating_residual, harmonic_rhs};
pub use sparse::Amplitudes;
pub use full::solve_to;
pub use sparse::{AmplitudeMap, Recorder, SparseSolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// One matrix, one letter.
    PureGravity,
    /// Three spins with propagator `G_ij = c` off the diagonal.
    Potts3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec<R> {
    pub kind: ModelKind,
    pub c: R,
    pub max_order: usize,
    pub max_len: usize,
}

impl<R: Ring> ModelSpec<R> {
    pub fn potts(c: R, max_order: usize, max_len: usize) -> Result<Self> {
        let d = R::one() + c.clone() - R::from_i64(2) * c.clone() * c.clone();
        if d.is_zero() {
            return Err(Error::PropagatorPole(format!("{c:?}")));
        }
        Ok(ModelSpec { kind: ModelKind::Potts3, c, max_order, max_len })
    }

    pub fn pure_gravity(max_order: usize, max_len: usize) -> Self {
        ModelSpec { kind: ModelKind::PureGravity, c: R::zero(), max_order, max_len }
    }

    pub fn alphabet(&self) -> &'static [u8] {
        match self.kind {
            ModelKind::PureGravity => &[0],
            ModelKind::Potts3 => &[0, 1, 2],
        }
    }

    pub fn propagator(&self, a: u8, b: u8) -> R {
        if a == b {
            R::one()
        } else {
            self.c.clone()
        }
    }

    /// Words over letters the model does not have are identically zero.
    pub fn admits(&self, w: &Word) -> bool {
        match self.kind {
            ModelKind::Potts3 => true,
            ModelKind::PureGravity => !w.contains(1) && !w.contains(2),
        }
    }
}

/// Grade of a coefficient `(w, g^n)`.
pub fn grade(w: &Word, n: usize) -> usize {
    w.len() + 2 * n
}

/// Visit every coefficient the recursion reads for `(w, n)`.
pub(crate) fn for_each_dependency(alphabet: &[u8], w: Word, n: usize, mut f: impl FnMut(Word, usize)) {
    if w.is_empty() {
        return;
    }
    let rest = w.tail();
    for j in 0..rest.len() {
        let (u, tv) = rest.split_at(j);
        let v = tv.tail();
        for m in 0..=n {
            f(u, m);
            f(v, n - m);
        }
    }
    if n >= 1 {
        for &j in alphabet {
            f(rest.push_front(j).push_front(j), n - 1);
        }
    }
}

/// One application of the recursion. `get` returns `None` for coefficients
/// known to vanish.
pub(crate) fn recursion_step<'a, R: Ring + 'a>(
    c: &R,
    alphabet: &[u8],
    w: Word,
    n: usize,
    get: &impl Fn(Word, usize) -> Option<&'a R>,
) -> R {
    if w.is_empty() {
        return if n == 0 { R::one() } else { R::zero() };
    }
    let a = w.first().unwrap();
    let rest = w.tail();
    let mut same = R::zero();
    let mut mixed = R::zero();
    for j in 0..rest.len() {
        let b = rest.letter(j);
        let (u, tv) = rest.split_at(j);
        let v = tv.tail();
        let acc = if b == a { &mut same } else { &mut mixed };
        for m in 0..=n {
            if let (Some(pu), Some(pv)) = (get(u, m), get(v, n - m)) {
                acc.add_product(pu, pv);
            }
        }
    }
    if n >= 1 {
        for &j in alphabet {
            if let Some(p) = get(rest.push_front(j).push_front(j), n - 1) {
                if j == a {
                    same += p;
                } else {
                    mixed += p;
                }
            }
        }
    }
    if !mixed.is_zero() {
        same += &mixed.mul_ref(c);
    }
    same
}
