use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap as HashMap;

use super::truncation::Truncation;
use super::word::Word;

use crate::ring::{GSeries, Ring};

/// Products whose words fit in this length accumulate into dense arrays.
const DENSE_MAX_LEN: usize = 14;

/// Truncated element of `R[[g]]<<x0, x1, x2>>`. Absent words are zero;
/// each stored coefficient carries the order `trunc.order_for(|w|)`.
///
/// Operations track truncation honestly: a derivative lowers the known
/// grade by one, multiplication by a letter raises it, and a product is
/// known as far as both factors and their valuations allow.
#[derive(Clone, Debug, PartialEq)]
pub struct NCSeries<R: Ring> {
    trunc: Truncation,
    terms: HashMap<Word, GSeries<R>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A derivative `Δ_i` (left) or `←Δ_i` (right).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delta {
    pub side: Side,
    pub letter: u8,
}

impl Delta {
    pub fn left(letter: u8) -> Self {
        Delta { side: Side::Left, letter }
    }
    pub fn right(letter: u8) -> Self {
        Delta { side: Side::Right, letter }
    }
}

impl<R: Ring> NCSeries<R> {
    pub fn zero(trunc: Truncation) -> Self {
        NCSeries { trunc, terms: HashMap::default() }
    }

    pub fn one(trunc: Truncation) -> Self {
        let mut s = Self::zero(trunc);
        s.insert(Word::EMPTY, GSeries::one());
        s
    }

    /// The series consisting of a single word with a coefficient.
    pub fn monomial(trunc: Truncation, w: Word, c: GSeries<R>) -> Self {
        let mut s = Self::zero(trunc);
        s.insert(w, c);
        s
    }

    pub fn from_terms(trunc: Truncation, terms: impl IntoIterator<Item = (Word, GSeries<R>)>) -> Self {
        let mut s = Self::zero(trunc);
        for (w, c) in terms {
            s.add_term(w, &c);
        }
        s
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Store `c` at `w`, truncated to the known order; dropped if `w` is
    /// beyond the truncation or the coefficient vanishes.
    pub fn insert(&mut self, w: Word, c: GSeries<R>) {
        match self.trunc.order_for(w.len()) {
            Some(n) => {
                let c = c.with_order(Some(n));
                if c.is_zero_series() {
                    self.terms.remove(&w);
                } else {
                    self.terms.insert(w, c);
                }
            }
            None => {
                self.terms.remove(&w);
            }
        }
    }

    pub fn add_term(&mut self, w: Word, c: &GSeries<R>) {
        self.add_product_term(w, None, c);
    }

    /// `coeff(w) += a * c`, or `+= c` without `a`.
    fn add_product_term(&mut self, w: Word, a: Option<&GSeries<R>>, c: &GSeries<R>) {
        let Some(n) = self.trunc.order_for(w.len()) else { return };
        let entry = self.terms.entry(w).or_insert_with(|| GSeries::zero_to(n));
        match a {
            Some(a) => entry.add_product_to_order(a, c),
            None => entry.add_product_to_order(c, &GSeries::one()),
        }
        if entry.is_zero_series() {
            self.terms.remove(&w);
        }
    }

    /// In place `self += a * other`; the truncation becomes the meet.
    pub fn add_scaled(&mut self, a: &GSeries<R>, other: &Self) {
        self.add_scaled_prefixed(a, None, other);
    }

    /// In place `self += a * x_l * other` (or `a * other` without a letter),
    /// without materializing the shifted series.
    pub fn add_scaled_prefixed(&mut self, a: &GSeries<R>, prefix: Option<u8>, other: &Self) {
        let shifted = match prefix {
            Some(_) => other.trunc.raised(),
            None => other.trunc.clone(),
        };
        let trunc = self.trunc.meet(&shifted);
        if trunc != self.trunc {
            *self = self.restrict(&trunc);
        }
        for (w, c) in &other.terms {
            let w = prefix.map_or(*w, |l| w.push_front(l));
            self.add_product_term(w, Some(a), c);
        }
    }

    /// Coefficient of `w` (zero to the known order if absent), or `None`
    /// if `w` is outside the truncation.
    pub fn get(&self, w: &Word) -> Option<GSeries<R>> {
        let n = self.trunc.order_for(w.len())?;
        Some(self.terms.get(w).cloned().unwrap_or_else(|| GSeries::zero_to(n)))
    }

    /// Coefficient of `w g^n`, or `None` if it is not known.
    pub fn coeff(&self, w: &Word, n: usize) -> Option<R> {
        if !self.trunc.retains(w.len(), n) {
            return None;
        }
        Some(self.terms.get(w).and_then(|c| c.coeff_ref(n).cloned()).unwrap_or_else(R::zero))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &GSeries<R>)> {
        self.terms.iter()
    }

    /// Entries in length-lex word order.
    pub fn sorted(&self) -> Vec<(Word, &GSeries<R>)> {
        let mut v: Vec<_> = self.terms.iter().map(|(w, c)| (*w, c)).collect();
        v.sort_by_key(|(w, _)| *w);
        v
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Sync) -> NCSeries<S>
    where
        R: Sync,
    {
        let terms = self.terms.par_iter().map(|(w, c)| (*w, c.map(&f))).collect();
        NCSeries { trunc: self.trunc.clone(), terms }
    }

    /// Restrict to a smaller truncation.
    pub fn restrict(&self, trunc: &Truncation) -> Self {
        let trunc = self.trunc.meet(trunc);
        let mut out = Self::zero(trunc);
        for (w, c) in &self.terms {
            out.insert(*w, c.clone());
        }
        out
    }

    /// Minimal length of a word with nonzero `g^n` coefficient, per order.
    fn min_len_by_order(&self) -> Vec<Option<usize>> {
        let mut v: Vec<Option<usize>> = Vec::new();
        for (w, c) in &self.terms {
            for (n, a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if v.len() <= n {
                    v.resize(n + 1, None);
                }
                v[n] = Some(v[n].map_or(w.len(), |l| l.min(w.len())));
            }
        }
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&GSeries::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-GSeries::one(), other);
        out
    }

    pub fn scale(&self, a: &GSeries<R>) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        out.add_scaled(a, self);
        out
    }

    /// Multiply by `g`.
    pub fn mul_g(&self) -> Self {
        let trunc = self.trunc.times_g();
        let mut out = Self::zero(trunc);
        for (w, c) in &self.terms {
            out.insert(*w, c.shift(1));
        }
        out
    }

    /// Multiply by the letter `x_l` on the given side.
    pub fn mul_letter(&self, side: Side, l: u8) -> Self {
        let trunc = self.trunc.raised();
        let mut out = Self::zero(trunc);
        for (w, c) in &self.terms {
            let nw = match side {
                Side::Left => w.push_front(l),
                Side::Right => w.push_back(l),
            };
            out.insert(nw, c.clone());
        }
        out
    }

    /// `Δ_l` strips a leading `x_l`; `←Δ_l` strips a trailing one.
    pub fn delta(&self, d: Delta) -> Self {
        let trunc = self.trunc.lowered();
        let mut out = Self::zero(trunc);
        for (w, c) in &self.terms {
            let hit = match d.side {
                Side::Left => w.first() == Some(d.letter),
                Side::Right => w.last() == Some(d.letter),
            };
            if hit {
                let nw = match d.side {
                    Side::Left => w.tail(),
                    Side::Right => w.init(),
                };
                out.insert(nw, c.clone());
            }
        }
        out
    }

    /// Apply derivatives in sequence, first element first.
    pub fn apply(&self, ops: &[Delta]) -> Self {
        ops.iter().fold(self.clone(), |acc, d| acc.delta(*d))
    }

    /// Apply an operator string written the usual way, `Δ_{a1} Δ_{a2} ... Δ_{ak}`,
    /// which acts rightmost first.
    pub fn apply_left_string(&self, letters: &[u8]) -> Self {
        let ops: Vec<Delta> = letters.iter().rev().map(|&l| Delta::left(l)).collect();
        self.apply(&ops)
    }

    /// `S ←(Δ_{b1} ... Δ_{bk})`: right derivatives act leftmost first.
    pub fn apply_right_string(&self, letters: &[u8]) -> Self {
        let ops: Vec<Delta> = letters.iter().map(|&l| Delta::right(l)).collect();
        self.apply(&ops)
    }

    /// Both sides of the cyclic transfer rule `L S ←R = (L R) S`, which
    /// holds whenever `S` is invariant under rotating its words.
    pub fn cyclic_transfer(&self, left: &[u8], right: &[u8]) -> (Self, Self) {
        let lhs = self.apply_left_string(left).apply_right_string(right);
        let joined: Vec<u8> = left.iter().chain(right).copied().collect();
        (lhs, self.apply_left_string(&joined))
    }

    /// Every stored coefficient agrees with that of each rotation of its word.
    pub fn is_cyclic(&self) -> bool {
        self.terms.iter().all(|(w, c)| {
            (1..w.len()).all(|k| self.get(&w.rotate(k)).map_or(c.is_zero(), |d| d == *c))
        })
    }

    /// Set every word containing one of the given letters to zero.
    pub fn kill_letters(&self, letters: &[u8]) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        for (w, c) in &self.terms {
            if !letters.iter().any(|&l| w.contains(l)) {
                out.insert(*w, c.clone());
            }
        }
        out
    }

    pub fn permute(&self, sigma: [u8; 3]) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        for (w, c) in &self.terms {
            out.insert(w.permute(sigma), c.clone());
        }
        out
    }

    pub fn reverse(&self) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        for (w, c) in &self.terms {
            out.insert(w.reverse(), c.clone());
        }
        out
    }

    /// Noncommutative product.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = Truncation::product(&self.trunc, &self.min_len_by_order(), &other.trunc, &other.min_len_by_order());
        let orders: Vec<Option<usize>> = (0..=super::MAX_WORD_LEN).map(|l| trunc.order_for(l)).collect();
        let max_len = super::MAX_WORD_LEN;
        // right factor bucketed by length, each bucket sorted by g-valuation
        let mut buckets: Vec<Vec<(Word, &GSeries<R>, usize)>> = vec![Vec::new(); max_len + 1];
        for (v, b) in &other.terms {
            buckets[v.len()].push((*v, b, b.valuation().unwrap_or(0)));
        }
        for bucket in buckets.iter_mut() {
            bucket.sort_by_key(|(v, _, val)| (*val, *v));
        }
        let mut lhs: Vec<(Word, &GSeries<R>, usize)> =
            self.terms.iter().map(|(u, a)| (*u, a, a.valuation().unwrap_or(0))).collect();
        lhs.sort_by_key(|(u, _, _)| *u);
        let top = lhs.iter().map(|(u, _, _)| u.len()).max().unwrap_or(0)
            + buckets.iter().rposition(|b| !b.is_empty()).unwrap_or(0);
        let chunk = lhs.len() / (4 * rayon::current_num_threads()) + 1;
        let mut out = Self::zero(trunc);
        if top <= DENSE_MAX_LEN {
            // dense accumulators indexed by (length, code)
            let partials: Vec<Vec<Vec<GSeries<R>>>> = lhs
                .par_chunks(chunk)
                .map(|part| {
                    let mut acc: Vec<Vec<GSeries<R>>> = (0..=top)
                        .map(|l| match orders[l] {
                            Some(n) => vec![GSeries::zero_to(n); 3usize.pow(l as u32)],
                            None => Vec::new(),
                        })
                        .collect();
                    for (u, a, va) in part {
                        for lv in 0..=top - u.len() {
                            let Some(n) = orders[u.len() + lv] else { continue };
                            if *va > n {
                                continue;
                            }
                            let slots = &mut acc[u.len() + lv];
                            for (v, b, vb) in &buckets[lv] {
                                if va + vb > n {
                                    break;
                                }
                                slots[u.concat(v).code() as usize].add_product_to_order(a, b);
                            }
                        }
                    }
                    acc
                })
                .collect();
            let mut total: Option<Vec<Vec<GSeries<R>>>> = None;
            for part in partials {
                match total.as_mut() {
                    None => total = Some(part),
                    Some(t) => {
                        for (tl, pl) in t.iter_mut().zip(part) {
                            for (x, y) in tl.iter_mut().zip(pl) {
                                *x += &y;
                            }
                        }
                    }
                }
            }
            for (l, slots) in total.unwrap_or_default().into_iter().enumerate() {
                for (code, c) in slots.into_iter().enumerate() {
                    if !c.is_zero_series() {
                        out.insert(Word::from_code(l, code as u64), c);
                    }
                }
            }
            return out;
        }
        let partials: Vec<HashMap<Word, GSeries<R>>> = lhs
            .par_chunks(chunk)
            .map(|part| {
                let mut acc: HashMap<Word, GSeries<R>> = HashMap::default();
                for (u, a, va) in part {
                    for lv in 0..=max_len - u.len() {
                        let Some(n) = orders[u.len() + lv] else { continue };
                        if *va > n {
                            continue;
                        }
                        for (v, b, vb) in &buckets[lv] {
                            if va + vb > n {
                                break;
                            }
                            acc.entry(u.concat(v)).or_insert_with(|| GSeries::zero_to(n)).add_product_to_order(a, b);
                        }
                    }
                }
                acc
            })
            .collect();
        for part in partials {
            for (w, c) in part {
                out.add_term(w, &c);
            }
        }
        out
    }

    /// The `x_0`-only generating function `Σ_k coeff(0^k) x0^k`.
    pub fn restrict_to_letter(&self, l: u8) -> Vec<GSeries<R>> {
        (0..=self.trunc.max_len())
            .map_while(|k| self.get(&Word::letter_repeat(l, k)))
            .collect()
    }

    /// `true` if every stored coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = NCSeries<BigRational>;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn one_g() -> GSeries<BigRational> {
        GSeries::one()
    }

    #[test]
    fn product_respects_truncation() {
        let t = Truncation::new(3, 0);
        let a = S::from_terms(t.clone(), [(w("0"), one_g()), (w("12"), one_g())]);
        let b = S::from_terms(t.clone(), [(w("1"), one_g()), (w("20"), one_g())]);
        let p = a.mul(&b);
        // valuations are length 1, so the product is known to length 4
        assert_eq!(p.trunc().max_len(), 4);
        assert_eq!(p.coeff(&w("01"), 0), Some(BigRational::from_integer(1.into())));
        assert_eq!(p.coeff(&w("1220"), 0), Some(BigRational::from_integer(1.into())));
        assert_eq!(p.coeff(&w("00"), 0), Some(BigRational::zero()));
    }

    #[test]
    fn derivatives_strip_letters() {
        let t = Truncation::new(4, 0);
        let s = S::from_terms(t.clone(), [(w("101"), one_g()), (w("0"), one_g())]);
        let l = s.delta(Delta::left(1));
        assert_eq!(l.coeff(&w("01"), 0), Some(BigRational::from_integer(1.into())));
        assert_eq!(l.trunc().max_len(), 3);
        let both = s.apply(&[Delta::left(1), Delta::right(1)]);
        assert_eq!(both.coeff(&w("0"), 0), Some(BigRational::from_integer(1.into())));
        // Δ2 Δ1 Δ1 acts Δ1 first: picks words beginning 112
        let s2 = S::from_terms(t.clone(), [(w("1120"), one_g())]);
        assert_eq!(s2.apply_left_string(&[2, 1, 1]).coeff(&w("0"), 0), Some(BigRational::from_integer(1.into())));
    }

    #[test]
    fn cyclic_transfer_needs_cyclic_series() {
        let t = Truncation::new(6, 0);
        let rotations = |s: &str| (0..s.len()).map(|k| (w(s).rotate(k), one_g())).collect::<Vec<_>>();
        let mut terms = rotations("012121");
        terms.extend(rotations("0121"));
        let cyc = S::from_terms(t.clone(), terms);
        assert!(cyc.is_cyclic());
        let (l, r) = cyc.cyclic_transfer(&[1, 0], &[1, 2]);
        assert_eq!(l, r);
        assert!(!l.is_zero());
        let open = S::from_terms(t, [(w("012121"), one_g())]);
        assert!(!open.is_cyclic());
        let (l, r) = open.cyclic_transfer(&[1, 0], &[1, 2]);
        assert_ne!(l, r);
    }
}
