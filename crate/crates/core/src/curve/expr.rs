//! Minimal arithmetic expressions (`+ - * ^`, parentheses, integers and
//! named symbols), evaluated in any ring. Keeps long printed formulas as
//! text that can be checked against the source line by line.

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Sym(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().map_err(|_| bad(s, "integer too large"))?));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Sym(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(bad(s, &format!("unexpected {ch:?}")));
        }
    }
    Ok(out)
}

fn bad(s: &str, why: &str) -> Error {
    let head: String = s.chars().take(40).collect();
    Error::Invalid(format!("expression {head:?}...: {why}"))
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.product()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.product()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.eat('*') {
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(k)) if k >= 0 => {
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), k as u32));
                }
                _ => return Err(bad(self.src, "exponent must be a nonnegative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Int(k))
            }
            Some(Tok::Sym(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(bad(self.src, "unbalanced parenthesis"));
                }
                Ok(e)
            }
            _ => Err(bad(self.src, "expected a value")),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { src: s, toks: lex(s)?, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(bad(s, "trailing input"));
        }
        Ok(e)
    }

    /// Evaluate with `sym` supplying every named symbol.
    pub fn eval<V: Ring>(&self, sym: &impl Fn(&str) -> Option<V>) -> Result<V> {
        Ok(match self {
            Expr::Int(k) => V::from_i64(*k),
            Expr::Sym(s) => sym(s).ok_or_else(|| Error::Unknown { kind: "symbol", name: s.clone() })?,
            Expr::Neg(a) => -a.eval(sym)?,
            Expr::Add(a, b) => a.eval(sym)?.add_ref(&b.eval(sym)?),
            Expr::Sub(a, b) => a.eval(sym)?.sub_ref(&b.eval(sym)?),
            Expr::Mul(a, b) => a.eval(sym)?.mul_ref(&b.eval(sym)?),
            Expr::Pow(a, k) => a.eval(sym)?.pow(*k),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = Expr::parse("-2*x^2 + 3*(x - 1)").unwrap();
        let at = |v: i128| e.eval(&|s: &str| (s == "x").then_some(v)).unwrap();
        assert_eq!(at(2), -8 + 3);
        assert_eq!(at(0), -3);
        assert!(Expr::parse("(x + 1").is_err());
        assert!(Expr::parse("x^y").is_err());
    }
}
