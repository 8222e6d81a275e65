use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ring::ParseError;

pub const MAX_WORD_LEN: usize = 40;

const POW3: [u64; MAX_WORD_LEN + 1] = {
    let mut t = [1u64; MAX_WORD_LEN + 1];
    let mut i = 1;
    while i <= MAX_WORD_LEN {
        t[i] = t[i - 1] * 3;
        i += 1;
    }
    t
};

/// Word over the three spin letters {0, 1, 2}, packed base 3 with the first
/// letter most significant. The derived order is length-lex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    code: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, code: 0 };

    pub fn from_letters(letters: &[u8]) -> Word {
        assert!(letters.len() <= MAX_WORD_LEN, "word longer than {MAX_WORD_LEN}");
        let mut code = 0u64;
        for &l in letters {
            assert!(l < 3, "letter {l} outside the spin alphabet");
            code = code * 3 + l as u64;
        }
        Word { len: letters.len() as u8, code }
    }

    pub fn letter_repeat(l: u8, k: usize) -> Word {
        Word::from_letters(&vec![l; k])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letter(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.code / POW3[self.len() - 1 - i]) % 3) as u8
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.letters().collect()
    }

    pub fn first(&self) -> Option<u8> {
        (!self.is_empty()).then(|| (self.code / POW3[self.len() - 1]) as u8)
    }

    pub fn last(&self) -> Option<u8> {
        (!self.is_empty()).then(|| (self.code % 3) as u8)
    }

    /// Drop the first letter.
    pub fn tail(&self) -> Word {
        assert!(!self.is_empty());
        Word { len: self.len - 1, code: self.code % POW3[self.len() - 1] }
    }

    /// Drop the last letter.
    pub fn init(&self) -> Word {
        assert!(!self.is_empty());
        Word { len: self.len - 1, code: self.code / 3 }
    }

    pub fn push_front(&self, l: u8) -> Word {
        assert!(self.len() < MAX_WORD_LEN && l < 3);
        Word { len: self.len + 1, code: l as u64 * POW3[self.len()] + self.code }
    }

    pub fn push_back(&self, l: u8) -> Word {
        assert!(self.len() < MAX_WORD_LEN && l < 3);
        Word { len: self.len + 1, code: self.code * 3 + l as u64 }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_WORD_LEN, "word longer than {MAX_WORD_LEN}");
        Word { len: len as u8, code: self.code * POW3[other.len()] + other.code }
    }

    /// `(w[..i], w[i..])`.
    pub fn split_at(&self, i: usize) -> (Word, Word) {
        let r = self.len() - i;
        (Word { len: i as u8, code: self.code / POW3[r] }, Word { len: r as u8, code: self.code % POW3[r] })
    }

    /// `w[i..j]`.
    pub fn slice(&self, i: usize, j: usize) -> Word {
        let (head, _) = self.split_at(j);
        head.split_at(i).1
    }

    /// Move the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return *self;
        }
        let (a, b) = self.split_at(k % self.len());
        b.concat(&a)
    }

    pub fn reverse(&self) -> Word {
        let mut code = 0u64;
        let mut c = self.code;
        for _ in 0..self.len {
            code = code * 3 + c % 3;
            c /= 3;
        }
        Word { len: self.len, code }
    }

    /// Apply a letter permutation `l -> sigma[l]`.
    pub fn permute(&self, sigma: [u8; 3]) -> Word {
        let v: Vec<u8> = self.letters().map(|l| sigma[l as usize]).collect();
        Word::from_letters(&v)
    }

    pub fn count(&self, l: u8) -> usize {
        self.letters().filter(|&x| x == l).count()
    }

    pub fn contains(&self, l: u8) -> bool {
        self.letters().any(|x| x == l)
    }

    /// Smallest rotation (necklace representative).
    pub fn cyclic_rep(&self) -> Word {
        (0..self.len().max(1)).map(|k| self.rotate(k)).min().unwrap()
    }

    /// Smallest word under rotation, reversal and letter permutation; the
    /// class of this word under all symmetries of planar Potts amplitudes.
    pub fn canonical(&self) -> Word {
        let mut best = *self;
        for sigma in PERMUTATIONS {
            let p = self.permute(sigma);
            for w in [p, p.reverse()] {
                let r = w.cyclic_rep();
                if r < best {
                    best = r;
                }
            }
        }
        best
    }

    /// All words of length `n` in length-lex order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Word> {
        (0..POW3[n]).map(move |code| Word { len: n as u8, code })
    }

    /// Base-3 code, first letter most significant; `0..3^len`.
    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn from_code(len: usize, code: u64) -> Word {
        assert!(len <= MAX_WORD_LEN && code < POW3[len]);
        Word { len: len as u8, code }
    }
}

pub const PERMUTATIONS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Word, ParseError> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Word::EMPTY);
        }
        let bad = || ParseError { what: "word", input: s.to_string() };
        let letters: Vec<u8> = s
            .chars()
            .map(|ch| ch.to_digit(10).filter(|&d| d < 3).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        if letters.len() > MAX_WORD_LEN {
            return Err(bad());
        }
        Ok(Word::from_letters(&letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn packing() {
        let a = w("01121");
        assert_eq!(a.to_vec(), vec![0, 1, 1, 2, 1]);
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.last(), Some(1));
        assert_eq!(a.tail(), w("1121"));
        assert_eq!(a.init(), w("0112"));
        assert_eq!(a.reverse(), w("12110"));
        assert_eq!(a.rotate(2), w("12101"));
        assert_eq!(a.split_at(2), (w("01"), w("121")));
        assert_eq!(a.slice(1, 3), w("11"));
        assert_eq!(w("ε"), Word::EMPTY);
        assert_eq!(Word::EMPTY.to_string(), "ε");
    }

    #[test]
    fn length_lex_order() {
        let mut v = vec![w("10"), w("2"), w("01"), w("000"), Word::EMPTY];
        v.sort();
        assert_eq!(v, vec![Word::EMPTY, w("2"), w("01"), w("10"), w("000")]);
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(w("1202").canonical(), w("0102"));
        assert_eq!(w("1212").canonical(), w("0101"));
        assert_eq!(w("2211").canonical(), w("0011"));
        assert_eq!(w("2").canonical(), w("0"));
    }

    #[test]
    fn rejects_bad_letters() {
        assert!("013".parse::<Word>().is_err());
        assert!("0a".parse::<Word>().is_err());
    }
}
