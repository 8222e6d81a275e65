//! Brute-force referee: disk amplitudes from Wick contractions, with no
//! loop equation anywhere.
//!
//! `⟨Tr X_{w1} ··· X_{wL}⟩/N` at order `g^n` is a sum over ribbon graphs:
//! one boundary vertex carrying the word in cyclic order, `n` trivalent
//! vertices `Tr X_s³` each of a single spin `s`, and a perfect matching of
//! all half-edges. Each edge carries `G_ab` (`1` or `c`), each graph the
//! factor `1/(n! 3^n)` from expanding `exp(N g/3 Σ_s Tr X_s³)`, and
//! `N^(χ−2)` from the ribbon structure. Only connected graphs survive the
//! normalisation by the partition function; the planar ones have `χ = 2`.
//!
//! Genus comes from face tracing: faces are the cycles of `σ∘α`, with `σ`
//! the rotation at each vertex and `α` the matching. Unmatched half-edges
//! are fixed points of `α`, which makes the partial genus a lower bound on
//! the genus of every completion, so the search prunes on it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::ring::{Field, Poly, RationalFunction, Ring};
use crate::solver::{Amplitudes, ModelKind};
use crate::CPoly;

/// Largest `(H − 1)!!` (matchings of `H` half-edges) the search accepts.
pub const MAX_MATCHINGS: f64 = 1e9;

/// `G_ab`, and the quadratic kernel it inverts.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorMatrix<K> {
    pub g: [[K; 3]; 3],
}

impl<K: Field> PropagatorMatrix<K> {
    pub fn new(c: &K) -> Self {
        let g = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { K::one() } else { c.clone() }));
        PropagatorMatrix { g }
    }

    /// `K = [(1+2c) I − c J] / (1 + c − 2c²)`, with `J` the all-ones matrix.
    pub fn kernel(c: &K) -> Result<[[K; 3]; 3]> {
        let d = K::one() + c.clone() - K::from_i64(2) * c.clone() * c.clone();
        let inv_d = d.checked_inv().map_err(|_| Error::PropagatorPole(format!("{c:?}")))?;
        let diag = (K::one() + c.clone()).mul_ref(&inv_d);
        let off = (-c.clone()).mul_ref(&inv_d);
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| if i == j { diag.clone() } else { off.clone() })))
    }
}

/// Whether `K · G = I`. The kernel's pole at `1 + c − 2c² = 0` (e.g.
/// `c = 1`) is reported as an error, not a failed check.
pub fn verify_propagator<K: Field>(c: &K) -> Result<bool> {
    let k = PropagatorMatrix::kernel(c)?;
    let g = PropagatorMatrix::new(c).g;
    Ok((0..3).all(|i| {
        (0..3).all(|j| {
            let mut s = K::zero();
            for (kl, gl) in k[i].iter().zip(&g) {
                s.add_product(kl, &gl[j]);
            }
            s == if i == j { K::one() } else { K::zero() }
        })
    }))
}

/// A complete ribbon graph with its face-traced genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramInstance {
    pub word: Word,
    pub n: usize,
    /// Spin of each trivalent vertex.
    pub spins: Vec<u8>,
    /// Partner of each half-edge: boundary `0..L`, then vertex `v`'s three.
    pub matching: Vec<usize>,
    pub genus: usize,
}

/// Half-edge bookkeeping and an incremental matching.
struct Graph {
    boundary: usize,
    n: usize,
    partner: Vec<usize>,
}

const FREE: usize = usize::MAX;

impl Graph {
    fn new(boundary: usize, n: usize) -> Self {
        Graph { boundary, n, partner: vec![FREE; boundary + 3 * n] }
    }

    fn vertex(&self, h: usize) -> usize {
        if h < self.boundary {
            0
        } else {
            1 + (h - self.boundary) / 3
        }
    }

    /// Next half-edge around the same vertex.
    fn rotate(&self, h: usize) -> usize {
        if h < self.boundary {
            (h + 1) % self.boundary
        } else {
            let base = h - (h - self.boundary) % 3;
            base + (h - base + 1) % 3
        }
    }

    fn vertices(&self) -> usize {
        self.n + usize::from(self.boundary > 0)
    }

    /// `(components, 2·genus)`; unmatched half-edges act as fixed points.
    fn topology(&self) -> (usize, usize) {
        let h = self.partner.len();
        let v = self.vertices();
        let first = usize::from(self.boundary == 0);
        // union-find over vertices
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut edges = 0;
        for a in 0..h {
            let b = self.partner[a];
            if b != FREE && a < b {
                edges += 1;
                let (ra, rb) = (find(&mut parent, self.vertex(a)), find(&mut parent, self.vertex(b)));
                parent[ra] = rb;
            }
        }
        let components = (first..=self.n).filter(|&x| find(&mut parent, x) == x).count();
        let mut seen = vec![false; h];
        let mut faces = 0;
        for start in 0..h {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                let y = if self.partner[x] == FREE { x } else { self.partner[x] };
                x = self.rotate(y);
            }
        }
        // χ = V − E + F = 2·components − 2·genus
        let chi = v as i64 - edges as i64 + faces as i64;
        (components, (2 * components as i64 - chi) as usize)
    }

    fn lowest_free(&self) -> Option<usize> {
        self.partner.iter().position(|&p| p == FREE)
    }

    fn pair(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    fn unpair(&mut self, a: usize, b: usize) {
        self.partner[a] = FREE;
        self.partner[b] = FREE;
    }
}

fn double_factorial_odd(h: usize) -> f64 {
    (1..h).step_by(2).map(|k| k as f64).product()
}

fn check_size(half_edges: usize) -> Result<()> {
    let estimate = double_factorial_odd(half_edges);
    if estimate > MAX_MATCHINGS {
        return Err(Error::Oversize { half_edges, estimate });
    }
    Ok(())
}

/// Visit every connected complete matching of genus `≤ max_genus`, with
/// the search split over the partner of the first half-edge.
fn for_each_matching<T: Send>(
    boundary: usize,
    n: usize,
    max_genus: usize,
    init: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[usize], usize) + Sync,
) -> Vec<T> {
    fn go<T>(g: &mut Graph, max_genus: usize, acc: &mut T, visit: &impl Fn(&mut T, &[usize], usize)) {
        let Some(a) = g.lowest_free() else {
            let (components, twice_genus) = g.topology();
            if components == 1 {
                visit(acc, &g.partner, twice_genus / 2);
            }
            return;
        };
        for b in a + 1..g.partner.len() {
            if g.partner[b] != FREE {
                continue;
            }
            g.pair(a, b);
            if g.topology().1 <= 2 * max_genus {
                go(g, max_genus, acc, visit);
            }
            g.unpair(a, b);
        }
    }
    let h = boundary + 3 * n;
    if h == 0 {
        let mut acc = init();
        visit(&mut acc, &[], 0);
        return vec![acc];
    }
    (1..h)
        .into_par_iter()
        .map(|b| {
            let mut g = Graph::new(boundary, n);
            let mut acc = init();
            g.pair(0, b);
            if g.topology().1 <= 2 * max_genus {
                go(&mut g, max_genus, &mut acc, &visit);
            }
            acc
        })
        .collect()
}

fn spin_choices(kind: ModelKind) -> &'static [u8] {
    match kind {
        ModelKind::PureGravity => &[0],
        ModelKind::Potts3 => &[0, 1, 2],
    }
}

/// Per genus, the number of (matching, spin assignment) pairs with `m`
/// edges joining different spins, for each `m`.
fn weighted_counts(kind: ModelKind, w: &Word, n: usize, max_genus: usize) -> Result<Vec<Vec<u64>>> {
    let letters = w.to_vec();
    let choices = spin_choices(kind);
    if letters.iter().any(|l| !choices.contains(l)) {
        return Ok(Vec::new());
    }
    let h = letters.len() + 3 * n;
    if h % 2 == 1 {
        return Ok(Vec::new());
    }
    check_size(h)?;
    let boundary = letters.len();
    let edges = h / 2;
    let parts = for_each_matching(
        boundary,
        n,
        max_genus,
        || vec![vec![0u64; edges + 1]; max_genus + 1],
        |acc, partner, genus| {
            let mut spins = vec![0u8; n];
            let assignments = choices.len().pow(n as u32);
            for code in 0..assignments {
                let mut k = code;
                for s in spins.iter_mut() {
                    *s = choices[k % choices.len()];
                    k /= choices.len();
                }
                let spin = |x: usize| if x < boundary { letters[x] } else { spins[(x - boundary) / 3] };
                let mixed = (0..h).filter(|&a| a < partner[a] && spin(a) != spin(partner[a])).count();
                acc[genus][mixed] += 1;
            }
        },
    );
    let mut total = vec![vec![0u64; edges + 1]; max_genus + 1];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            for (a, b) in t.iter_mut().zip(p) {
                *a += b;
            }
        }
    }
    Ok(total)
}

fn vertex_factor(n: usize) -> BigRational {
    let mut d = BigInt::one();
    for k in 1..=n {
        d *= BigInt::from(3 * k);
    }
    BigRational::new(BigInt::one(), d)
}

fn counts_to_poly(counts: &[u64], n: usize) -> Poly<BigRational> {
    let f = vertex_factor(n);
    Poly::new(counts.iter().map(|&k| BigRational::from_integer(k.into()) * &f).collect())
}

/// Coefficient of `g^n` in the planar `p_w`, as a polynomial in `c`.
pub fn planar_moment(kind: ModelKind, w: &Word, n: usize) -> Result<RationalFunction> {
    let counts = weighted_counts(kind, w, n, 0)?;
    Ok(counts.first().map(|c| RationalFunction::from_poly(counts_to_poly(c, n))).unwrap_or_else(RationalFunction::zero))
}

/// Contributions of each genus `0..=max_genus` to `⟨Tr w⟩/N` at `g^n`;
/// genus `h` comes with `N^(−2h)`.
pub fn genus_expansion(kind: ModelKind, w: &Word, n: usize, max_genus: usize) -> Result<Vec<RationalFunction>> {
    let counts = weighted_counts(kind, w, n, max_genus)?;
    let mut out: Vec<RationalFunction> = counts.iter().map(|c| RationalFunction::from_poly(counts_to_poly(c, n))).collect();
    out.resize(max_genus + 1, RationalFunction::zero());
    Ok(out)
}

/// Every connected ribbon graph for `(w, n)` with genus `≤ max_genus`,
/// spins included. Meant for inspection at small sizes.
pub fn diagrams(kind: ModelKind, w: &Word, n: usize, max_genus: usize) -> Result<Vec<DiagramInstance>> {
    let letters = w.to_vec();
    let h = letters.len() + 3 * n;
    if h % 2 == 1 {
        return Ok(Vec::new());
    }
    check_size(h)?;
    let choices = spin_choices(kind);
    let parts = for_each_matching(letters.len(), n, max_genus, Vec::new, |acc: &mut Vec<DiagramInstance>, partner, genus| {
        for code in 0..choices.len().pow(n as u32) {
            let mut k = code;
            let spins = (0..n)
                .map(|_| {
                    let s = choices[k % choices.len()];
                    k /= choices.len();
                    s
                })
                .collect();
            acc.push(DiagramInstance { word: *w, n, spins, matching: partner.to_vec(), genus });
        }
    });
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub word: Word,
    pub order: usize,
    pub oracle: String,
    pub table: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Oracle against table for every word up to `max_len` and order up to
/// `max_n` (parity-forbidden pairs included: both must vanish). `project`
/// takes the oracle's polynomial in `c` into the table's scalar ring.
pub fn compare_at<R: Ring + fmt::Display>(
    kind: ModelKind,
    table: &impl Amplitudes<R>,
    max_n: usize,
    max_len: usize,
    project: impl Fn(&RationalFunction) -> Result<R> + Sync,
) -> Result<ComparisonReport> {
    let alphabet = spin_choices(kind);
    let jobs: Vec<(Word, usize)> = (1..=max_len)
        .flat_map(|len| Word::all_of_len(len).filter(|w| w.letters().all(|l| alphabet.contains(&l))))
        .flat_map(|w| (0..=max_n).map(move |n| (w, n)))
        .collect();
    let mismatches = jobs
        .par_iter()
        .map(|(w, n)| {
            let oracle = project(&planar_moment(kind, w, *n)?)?;
            let table_value = table.amplitude(w, *n)?;
            Ok((oracle != table_value).then(|| Mismatch {
                word: *w,
                order: *n,
                oracle: oracle.to_string(),
                table: table_value.to_string(),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { checked: jobs.len(), mismatches: mismatches.into_iter().flatten().collect() })
}

/// A polynomial in `c` with integer coefficients, if `f` is one.
pub fn integer_poly(f: &RationalFunction) -> Result<CPoly> {
    let not = || Error::Invalid(format!("{f} is not an integer polynomial in c"));
    let den = f.denom();
    if den.degree() != Some(0) {
        return Err(not());
    }
    let d = den.coeff(0);
    f.numer()
        .coeffs()
        .iter()
        .map(|a| {
            let q = a / &d;
            q.is_integer().then(|| q.to_integer()).ok_or_else(not)
        })
        .collect::<Result<Vec<BigInt>>>()
        .map(CPoly::new)
}

/// [`compare_at`] for a table at symbolic `c`.
pub fn compare_with_solver(
    kind: ModelKind,
    table: &impl Amplitudes<CPoly>,
    max_n: usize,
    max_len: usize,
) -> Result<ComparisonReport> {
    compare_at(kind, table, max_n, max_len, integer_poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn w(s: &str) -> Word {
        Word::from_str(s).unwrap()
    }

    fn poly(coeffs: &[i64]) -> RationalFunction {
        RationalFunction::from(&CPoly::new(coeffs.iter().map(|&k| BigInt::from(k)).collect()))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_normalisation() {
        let p = |s: &str| planar_moment(ModelKind::Potts3, &w(s), 0).unwrap();
        assert_eq!(p("00"), poly(&[1]));
        assert_eq!(p("01"), poly(&[0, 1]));
        assert_eq!(p("0000"), poly(&[2]));
        assert_eq!(p("0011"), poly(&[1, 0, 1]));
        assert_eq!(p("000000"), poly(&[5]));
        assert!(p("000").is_zero());
    }

    #[test]
    fn parity_gives_zero() {
        assert!(planar_moment(ModelKind::Potts3, &w("00"), 1).unwrap().is_zero());
        assert!(planar_moment(ModelKind::Potts3, &w("0"), 2).unwrap().is_zero());
        assert!(!planar_moment(ModelKind::Potts3, &w("0"), 1).unwrap().is_zero());
    }

    #[test]
    fn harer_zagier_genus_split() {
        let counts = |l: usize, gmax: usize| -> Vec<RationalFunction> {
            genus_expansion(ModelKind::PureGravity, &Word::letter_repeat(0, l), 0, gmax).unwrap()
        };
        assert_eq!(counts(4, 1), vec![poly(&[2]), poly(&[1])]);
        assert_eq!(counts(6, 2), vec![poly(&[5]), poly(&[10]), poly(&[0])]);
        assert_eq!(counts(8, 2), vec![poly(&[14]), poly(&[70]), poly(&[21])]);
        // ⟨Tr X⁴⟩ = N³ Σ_h a_h N^(−2h) = 2N³ + N at N = 7
        let n = BigInt::from(7);
        let total: BigInt = counts(4, 1)
            .iter()
            .enumerate()
            .map(|(h, a)| a.eval(&BigRational::zero()).unwrap().to_integer() * n.pow(3 - 2 * h as u32))
            .sum();
        assert_eq!(total, BigInt::from(2 * 343 + 7));
    }

    #[test]
    fn genus_pruning_matches_full_enumeration() {
        let all = diagrams(ModelKind::Potts3, &w("0120"), 2, 3).unwrap();
        let planar = diagrams(ModelKind::Potts3, &w("0120"), 2, 0).unwrap();
        assert_eq!(planar.len(), all.iter().filter(|d| d.genus == 0).count());
        assert!(all.iter().all(|d| d.matching.iter().enumerate().all(|(a, &b)| b != a && d.matching[b] == a)));
    }

    #[test]
    fn propagator_inverts_kernel() {
        assert!(verify_propagator(&RationalFunction::var()).unwrap());
        assert!(verify_propagator(&q(0, 1)).unwrap());
        assert!(verify_propagator(&q(1, 3)).unwrap());
        assert!(matches!(verify_propagator(&q(1, 1)), Err(Error::PropagatorPole(_))));
        assert!(matches!(verify_propagator(&q(-1, 2)), Err(Error::PropagatorPole(_))));
    }

    #[test]
    fn oversize_is_rejected_with_estimate() {
        match planar_moment(ModelKind::Potts3, &Word::letter_repeat(0, 6), 6) {
            Err(Error::Oversize { half_edges, estimate }) => {
                assert_eq!(half_edges, 24);
                assert!(estimate > MAX_MATCHINGS);
            }
            other => panic!("{other:?}"),
        }
    }

    fn symbolic_table(kind: ModelKind, max_n: usize, max_len: usize) -> crate::solver::AmplitudeMap<CPoly> {
        use crate::solver::{AmplitudeMap, ModelSpec};
        let spec = match kind {
            ModelKind::Potts3 => ModelSpec::potts(CPoly::var(), max_n, max_len).unwrap(),
            ModelKind::PureGravity => ModelSpec::pure_gravity(max_n, max_len),
        };
        let requests = (1..=max_len).flat_map(Word::all_of_len).flat_map(|w| (0..=max_n).map(move |n| (w, n)));
        AmplitudeMap::solve(&spec, requests).unwrap()
    }

    #[test]
    fn agrees_with_solver() {
        let potts = symbolic_table(ModelKind::Potts3, 2, 4);
        let r = compare_with_solver(ModelKind::Potts3, &potts, 2, 4).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.checked, 120 * 3);
        let gravity = symbolic_table(ModelKind::PureGravity, 2, 6);
        let r = compare_with_solver(ModelKind::PureGravity, &gravity, 2, 6).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.checked, 6 * 3);
    }

    /// A table with one coefficient knocked off by one.
    struct Corrupt<'a, A>(&'a A, Word, usize);

    impl<A: Amplitudes<CPoly>> Amplitudes<CPoly> for Corrupt<'_, A> {
        fn amplitude(&self, w: &Word, n: usize) -> Result<CPoly> {
            let v = self.0.amplitude(w, n)?;
            Ok(if (*w, n) == (self.1, self.2) { v + CPoly::one() } else { v })
        }

        fn max_order(&self) -> usize {
            self.0.max_order()
        }
    }

    #[test]
    fn agrees_at_rational_coupling() {
        use crate::solver::{AmplitudeMap, ModelSpec};
        let c = q(2, 7);
        let spec = ModelSpec::potts(c.clone(), 3, 3).unwrap();
        let requests = (1..=3).flat_map(Word::all_of_len).flat_map(|w| (0..=3).map(move |n| (w, n)));
        let table = AmplitudeMap::solve(&spec, requests).unwrap();
        let r = compare_at(ModelKind::Potts3, &table, 3, 3, |f| Ok(f.eval(&c)?)).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
    }

    #[test]
    fn corruption_is_caught_exactly_once() {
        let table = symbolic_table(ModelKind::Potts3, 1, 3);
        let r = compare_with_solver(ModelKind::Potts3, &Corrupt(&table, w("012"), 1), 1, 3).unwrap();
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!((r.mismatches[0].word, r.mismatches[0].order), (w("012"), 1));
    }
}
