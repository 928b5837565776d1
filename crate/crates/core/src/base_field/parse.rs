//! Text form of elements of Q(e).
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] digits)?
//! primary := digits | 'e' | 'ε' | '(' expr ')'
//! ```
//!
//! `e` is the uniformizer. Whitespace is ignored. Multiplication is always
//! explicit: write `3*e^2`, not `3e^2`. Rational constants are written as
//! quotients, e.g. `3/2*e`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::RatFunc;
use crate::error::{Error, Result};

pub fn parse_ratfunc(input: &str) -> Result<RatFunc> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(parse_err(input, "empty expression"));
    }
    let mut p = Parser {
        src: input,
        chars,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(parse_err(input, &format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(v)
}

fn parse_err(src: &str, msg: &str) -> Error {
    Error::Parse(format!("{}: {}", msg, src))
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        parse_err(self.src, msg)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = &acc / &d;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.digits().ok_or_else(|| self.err("expected exponent"))?;
        let k: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        if base.is_zero() && neg {
            return Err(self.err("division by zero"));
        }
        Ok(base.pow(if neg { -k } else { k }))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('e') | Some('ε') => {
                self.pos += 1;
                Ok(RatFunc::eps_pow(1))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RatFunc::from_rational(BigRational::from_integer(n)))
            }
            Some(c) => Err(self.err(&format!("unexpected '{}'", c))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a rational `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational: {}", s));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
