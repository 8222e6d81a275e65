use std::collections::BTreeSet;
use std::sync::Mutex;

use rustc_hash::FxHashMap as HashMap;

use super::{for_each_dependency, recursion_step, ModelKind, ModelSpec, SolutionTable};
use crate::error::{Error, Result};
use crate::freealg::{Word, MAX_WORD_LEN};
use crate::ring::Ring;

/// Read access to disk amplitudes `p[w]` at `g^n`.
pub trait Amplitudes<R>: Sync {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R>;
    fn max_order(&self) -> usize;
}

fn missing(w: &Word, n: usize) -> Error {
    Error::MissingAmplitude { word: w.to_string(), order: n }
}

impl<R: Ring> Amplitudes<R> for SolutionTable<R> {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R> {
        if !self.spec.admits(w) {
            return Ok(R::zero());
        }
        self.phi.coeff(w, n).ok_or_else(|| missing(w, n))
    }

    fn max_order(&self) -> usize {
        self.phi.trunc().max_order()
    }
}

/// Every triangle has three half-edges, so `|w| + 3n` is even for any disk.
fn parity_forbidden(w: &Word, n: usize) -> bool {
    (w.len() + n) % 2 == 1
}

/// Memoized on-demand solver: computes only the coefficients reachable from
/// the requested ones. Uses the parity selection rule to prune.
#[derive(Debug)]
pub struct SparseSolver<R: Ring> {
    spec: ModelSpec<R>,
    memo: HashMap<(Word, usize), R>,
}

impl<R: Ring> SparseSolver<R> {
    pub fn new(spec: ModelSpec<R>) -> Self {
        SparseSolver { spec, memo: HashMap::default() }
    }

    fn trivially_zero(&self, w: &Word, n: usize) -> bool {
        parity_forbidden(w, n) || !self.spec.admits(w)
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    fn ensure(&mut self, w: Word, n: usize) {
        if self.trivially_zero(&w, n) || self.memo.contains_key(&(w, n)) {
            return;
        }
        let mut deps = Vec::new();
        for_each_dependency(self.spec.alphabet(), w, n, |u, m| deps.push((u, m)));
        for (u, m) in deps {
            self.ensure(u, m);
        }
        let value = {
            let memo = &self.memo;
            let kind = self.spec.kind;
            let get = |u: Word, m: usize| -> Option<&R> {
                if parity_forbidden(&u, m) || (kind == ModelKind::PureGravity && (u.contains(1) || u.contains(2))) {
                    return None;
                }
                let v = memo.get(&(u, m)).expect("dependency solved first");
                (!v.is_zero()).then_some(v)
            };
            recursion_step(&self.spec.c, self.spec.alphabet(), w, n, &get)
        };
        self.memo.insert((w, n), value);
    }

    pub fn coeff(&mut self, w: Word, n: usize) -> Result<R> {
        if w.len() + n > MAX_WORD_LEN {
            return Err(Error::InsufficientDepth {
                what: format!("solving p[{w}] at g^{n}"),
                needed: w.len() + n,
                available: MAX_WORD_LEN,
            });
        }
        if self.trivially_zero(&w, n) {
            return Ok(R::zero());
        }
        self.ensure(w, n);
        Ok(self.memo[&(w, n)].clone())
    }

    pub fn solve_all(&mut self, requests: impl IntoIterator<Item = (Word, usize)>) -> Result<()> {
        for (w, n) in requests {
            self.coeff(w, n)?;
        }
        Ok(())
    }

    /// Immutable table of everything solved so far.
    pub fn freeze(self, max_order: usize) -> AmplitudeMap<R> {
        AmplitudeMap { kind: self.spec.kind, max_order, values: self.memo }
    }
}

/// Frozen result of a sparse solve; safe to share across threads.
#[derive(Clone, Debug)]
pub struct AmplitudeMap<R> {
    kind: ModelKind,
    max_order: usize,
    values: HashMap<(Word, usize), R>,
}

impl<R: Ring> AmplitudeMap<R> {
    /// Solve exactly the requested coefficients (and what they depend on).
    pub fn solve(spec: &ModelSpec<R>, requests: impl IntoIterator<Item = (Word, usize)>) -> Result<Self> {
        let mut s = SparseSolver::new(spec.clone());
        s.solve_all(requests)?;
        Ok(s.freeze(spec.max_order))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> AmplitudeMap<S> {
        AmplitudeMap {
            kind: self.kind,
            max_order: self.max_order,
            values: self.values.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

impl<R: Ring> Amplitudes<R> for AmplitudeMap<R> {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R> {
        if parity_forbidden(w, n) || (self.kind == ModelKind::PureGravity && (w.contains(1) || w.contains(2))) {
            return Ok(R::zero());
        }
        if n > self.max_order {
            return Err(missing(w, n));
        }
        self.values.get(&(*w, n)).cloned().ok_or_else(|| missing(w, n))
    }

    fn max_order(&self) -> usize {
        self.max_order
    }
}

/// Dry-run table: answers zero and remembers what was asked. Evaluating a
/// residual against a recorder yields the exact set of amplitudes it needs.
#[derive(Debug)]
pub struct Recorder {
    max_order: usize,
    seen: Mutex<BTreeSet<(Word, usize)>>,
}

impl Recorder {
    pub fn new(max_order: usize) -> Self {
        Recorder { max_order, seen: Mutex::new(BTreeSet::new()) }
    }

    pub fn requests(self) -> BTreeSet<(Word, usize)> {
        self.seen.into_inner().expect("recorder lock")
    }
}

impl<R: Ring> Amplitudes<R> for Recorder {
    fn amplitude(&self, w: &Word, n: usize) -> Result<R> {
        self.seen.lock().expect("recorder lock").insert((*w, n));
        Ok(R::zero())
    }

    fn max_order(&self) -> usize {
        self.max_order
    }
}
