use super::word::MAX_WORD_LEN;

const CAP: i32 = MAX_WORD_LEN as i32;

/// Which coefficients `(w, g^n)` of a noncommutative series are known: those
/// with `|w| <= len_at(n)`. A bound of `-1` means nothing is known at that
/// order. Orders past the explicit list use `tail`.
///
/// A per-order bound (rather than a box in length and order) is what keeps
/// `g * S` honest: its `g^0` part is known to vanish at every length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    lens: Vec<i32>,
    tail: i32,
}

impl Truncation {
    fn from_parts(mut lens: Vec<i32>, tail: i32) -> Self {
        let tail = tail.clamp(-1, CAP);
        for l in lens.iter_mut() {
            *l = (*l).clamp(-1, CAP);
        }
        while lens.last() == Some(&tail) {
            lens.pop();
        }
        Truncation { lens, tail }
    }

    /// Words up to `max_len`, orders up to `max_order`.
    pub fn new(max_len: usize, max_order: usize) -> Self {
        Self::from_parts(vec![max_len as i32; max_order + 1], -1)
    }

    /// Everything of total grade `|w| + 2n <= grade`.
    pub fn by_grade(grade: usize) -> Self {
        Self::graded(grade, grade / 2, grade)
    }

    /// Length, order and grade bounds together.
    pub fn graded(max_len: usize, max_order: usize, max_grade: usize) -> Self {
        let lens = (0..=max_order).map(|n| (max_len as i32).min(max_grade as i32 - 2 * n as i32)).collect();
        Self::from_parts(lens, -1)
    }

    /// Known everywhere (exact polynomials such as the constant `1`).
    pub fn exact() -> Self {
        Truncation { lens: Vec::new(), tail: CAP }
    }

    pub fn len_at(&self, n: usize) -> i32 {
        self.lens.get(n).copied().unwrap_or(self.tail)
    }

    pub fn is_bounded(&self) -> bool {
        self.tail < 0
    }

    /// Highest order with anything known.
    pub fn max_order(&self) -> usize {
        if !self.is_bounded() {
            return usize::MAX / 8;
        }
        self.lens.iter().rposition(|&l| l >= 0).unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.lens.iter().copied().chain([self.tail]).max().unwrap_or(-1).max(0) as usize
    }

    /// Largest `G` such that every coefficient with `|w| + 2n <= G` and
    /// `n <= max_order` is known.
    pub fn complete_grade(&self, max_order: usize) -> i64 {
        (0..=max_order).map(|n| self.len_at(n) as i64 + 2 * n as i64).min().unwrap_or(-1)
    }

    /// Highest `n` such that orders `0..=n` are all known at length `len`.
    pub fn order_for(&self, len: usize) -> Option<usize> {
        let len = len as i32;
        let mut last = None;
        for n in 0..self.lens.len() {
            if self.lens[n] < len {
                return last;
            }
            last = Some(n);
        }
        if self.tail >= len {
            return Some(usize::MAX / 8);
        }
        last
    }

    pub fn retains(&self, len: usize, n: usize) -> bool {
        self.order_for(len).is_some_and(|m| n <= m)
    }

    pub fn meet(&self, other: &Truncation) -> Truncation {
        let k = self.lens.len().max(other.lens.len());
        let lens = (0..k).map(|n| self.len_at(n).min(other.len_at(n))).collect();
        Self::from_parts(lens, self.tail.min(other.tail))
    }

    fn map_lens(&self, f: impl Fn(i32) -> i32) -> Truncation {
        let exactish = |l: i32| if l >= CAP { CAP } else { f(l) };
        Self::from_parts(self.lens.iter().map(|&l| exactish(l)).collect(), exactish(self.tail))
    }

    /// After stripping one letter.
    pub(crate) fn lowered(&self) -> Truncation {
        self.map_lens(|l| (l - 1).max(-1))
    }

    /// After appending one letter.
    pub(crate) fn raised(&self) -> Truncation {
        self.map_lens(|l| if l < 0 { l } else { l + 1 })
    }

    /// After multiplying by `g`: the `g^0` part is known (zero) everywhere.
    pub(crate) fn times_g(&self) -> Truncation {
        let mut lens = vec![CAP];
        lens.extend((0..=self.lens.len()).map(|n| self.len_at(n)));
        Self::from_parts(lens, self.tail)
    }

    /// Truncation of a product, given each factor's minimal nonzero word
    /// length per order (`None` where a factor vanishes at that order).
    pub(crate) fn product(a: &Truncation, min_a: &[Option<usize>], b: &Truncation, min_b: &[Option<usize>]) -> Truncation {
        let k = a.lens.len() + b.lens.len() + min_a.len() + min_b.len() + 1;
        let at = |v: &[Option<usize>], i: usize| v.get(i).copied().flatten();
        let mut lens = Vec::with_capacity(k);
        for n in 0..k {
            let mut bound = CAP;
            for m in 0..=n {
                if let Some(l) = at(min_b, n - m) {
                    bound = bound.min(a.len_at(m) + l as i32);
                }
                if let Some(l) = at(min_a, m) {
                    bound = bound.min(b.len_at(n - m) + l as i32);
                }
            }
            lens.push(bound);
        }
        let overall = |v: &[Option<usize>]| v.iter().flatten().min().map(|&l| l as i32);
        let mut tail = CAP;
        if let Some(l) = overall(min_b) {
            if a.tail < CAP {
                tail = tail.min(a.tail + l);
            }
        }
        if let Some(l) = overall(min_a) {
            if b.tail < CAP {
                tail = tail.min(b.tail + l);
            }
        }
        Self::from_parts(lens, tail)
    }
}
