//! Text syntax: `-3/2*u0_1^2*u0_2 + u1_1 - 1`. Parentheses, unary minus and
//! division by constants are accepted on input; the printer emits the
//! expanded form in descending grevlex order.

use super::{Monomial, MonomialOrder, Polynomial, Rational, VariableSpace};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

pub fn parse_polynomial(text: &str, space: &Arc<VariableSpace>) -> Result<Polynomial> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, space };
    p.skip_ws();
    if p.pos == p.s.len() {
        return Err(p.err("empty polynomial"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parse `p`, `p/q` or a terminating decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let space = VariableSpace::named(&[]);
    let p = parse_polynomial(text, &space)?;
    if !p.is_constant() {
        return Err(Error::Parse { pos: 0, msg: format!("`{text}` is not a number") });
    }
    Ok(p.constant_term())
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    space: &'a Arc<VariableSpace>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse { pos: at, msg: "division only by nonzero constants".into() });
                    }
                    acc = acc.scale(&d.constant_term().recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let r = decimal(txt).ok_or(Error::Parse { pos: start, msg: format!("bad number `{txt}`") })?;
                Ok(Polynomial::constant(self.space, r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let i = self.space.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
                Ok(Polynomial::var(self.space, i))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn decimal(txt: &str) -> Option<Rational> {
    let (int_part, frac) = match txt.split_once('.') {
        Some((a, b)) => (a, b),
        None => (txt, ""),
    };
    if frac.contains('.') || (int_part.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int_part}{frac}");
    let n: BigInt = digits.parse().ok()?;
    Some(Rational::new(n, num_traits::pow(BigInt::from(10), frac.len())))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact decimal when the denominator has only factors 2 and 5, else `p/q`.
pub fn format_decimal(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format_rational(r);
    }
    let k = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), k));
    let n = scaled.numer().abs().to_string();
    let n = format!("{n:0>width$}", width = k + 1);
    let (a, b) = n.split_at(n.len() - k);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{a}.{b}")
}

pub(super) fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let order = MonomialOrder::grevlex(p.space().nvars());
    let mut ms: Vec<&Monomial> = p.terms().map(|(m, _)| m).collect();
    ms.sort_by(|a, b| order.cmp(b, a));
    let mut out = String::new();
    for (k, m) in ms.into_iter().enumerate() {
        let c = p.coefficient(m);
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = m.fmt_in(p.space());
        if m.is_one() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&a));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
