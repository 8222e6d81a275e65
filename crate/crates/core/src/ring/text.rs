//! Text forms: `p/q` rationals, `1 + 2*c - 1/3*c^2` polynomials and
//! `(num)/(den)` rational functions. Used by the CLI and by serde.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{Poly, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {what} from {input:?}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
}

fn perr(what: &'static str, input: &str) -> ParseError {
    ParseError { what, input: input.to_string() }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || perr("rational", s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn write_terms<C>(f: &mut fmt::Formatter<'_>, coeffs: &[C], render: impl Fn(&C) -> (bool, String, bool)) -> fmt::Result {
    let mut first = true;
    for (k, a) in coeffs.iter().enumerate() {
        let (neg, mag, unit) = render(a);
        if mag == "0" {
            continue;
        }
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        match k {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "c")?;
                } else {
                    write!(f, "c^{k}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs(), |a| (a.is_negative(), format_rational(&a.abs()), a.abs().is_one()))
    }
}

impl fmt::Display for Poly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs(), |a| (a.is_negative(), a.abs().to_string(), a.abs().is_one()))
    }
}

impl FromStr for Poly<BigRational> {
    type Err = ParseError;

    fn from_str(input: &str) -> Result<Self, ParseError> {
        let s: String = input.chars().filter(|ch| !ch.is_whitespace()).collect();
        if s.is_empty() {
            return Err(perr("polynomial", input));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if i > 0 && (ch == '+' || ch == '-') && !s[..i].ends_with('^') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);

        let mut coeffs: Vec<BigRational> = Vec::new();
        for t in terms {
            let (neg, body) = match t.as_bytes().first() {
                Some(b'-') => (true, &t[1..]),
                Some(b'+') => (false, &t[1..]),
                _ => (false, t),
            };
            let (coef, power) = match body.find('c') {
                None => (parse_rational(body).map_err(|_| perr("polynomial", input))?, 0usize),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(head).map_err(|_| perr("polynomial", input))?
                    };
                    let tail = &body[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| perr("polynomial", input))?
                    };
                    (coef, power)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigRational::zero());
            }
            if neg {
                coeffs[power] -= coef;
            } else {
                coeffs[power] += coef;
            }
        }
        Ok(Poly::new(coeffs))
    }
}

impl FromStr for RationalFunction {
    type Err = ParseError;

    fn from_str(input: &str) -> Result<Self, ParseError> {
        let s = input.trim();
        if let Some(rest) = s.strip_prefix('(') {
            if let Some((num, den)) = rest.split_once(")/(") {
                let den = den.strip_suffix(')').ok_or_else(|| perr("rational function", input))?;
                return RationalFunction::new(num.parse()?, den.parse()?)
                    .map_err(|_| perr("rational function", input));
            }
        }
        Ok(RationalFunction::from_poly(s.parse()?))
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl Serialize for Poly<BigRational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly<BigRational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip() {
        let p: Poly<BigRational> = "1 + 2*c - 1/3*c^2".parse().unwrap();
        assert_eq!(p.to_string(), "1 + 2*c - 1/3*c^2");
        let q: Poly<BigRational> = "-c^3 + c".parse().unwrap();
        assert_eq!(q.to_string(), "c - c^3");
        assert_eq!(Poly::<BigRational>::zero().to_string(), "0");
    }

    #[test]
    fn ratfunc_round_trip() {
        let r: RationalFunction = "(2 + c)/(1 + c - 2*c^2)".parse().unwrap();
        let back: RationalFunction = r.to_string().parse().unwrap();
        assert_eq!(r, back);
        assert!(r.to_string().starts_with('('));
    }

    #[test]
    fn rationals() {
        assert_eq!(format_rational(&parse_rational("6/8").unwrap()), "3/4");
        assert_eq!(format_rational(&parse_rational("-5").unwrap()), "-5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
