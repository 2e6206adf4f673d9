//! Coefficient expressions: rationals, entropy symbols, `+ - * / ^`, parentheses.
//!
//! Entropic quantities of a pure state are rewritten into non-negative
//! primitives so that sign questions stay decidable:
//! `H(A) = (I(A:R) + I(A:B))/2`, `H(A|B) = (I(A:R) - I(A:B))/2` and
//! `Hmin(A|R) = Hmax(A) - (Hmax(A)-Hmin(A|R))`.

use num_bigint::BigInt;

use super::poly::{RatFn, Q};
use super::CalculusError;

pub const ALPHA: &str = "alpha";
pub const I_AR: &str = "I(A:R)";
pub const I_AB: &str = "I(A:B)";
pub const HMAX: &str = "Hmax(A)";
pub const GAP: &str = "Hmax(A)-Hmin(A|R)";
pub const EPS: &str = "eps";

pub use super::poly::NONNEGATIVE as NONNEGATIVE_PRIMITIVES;

pub fn h_a() -> RatFn {
    RatFn::var(I_AR).add(&RatFn::var(I_AB)).mul(&half())
}

pub fn h_a_given_b() -> RatFn {
    RatFn::var(I_AR).sub(&RatFn::var(I_AB)).mul(&half())
}

pub fn h_min_a_given_r() -> RatFn {
    RatFn::var(HMAX).sub(&RatFn::var(GAP))
}

fn half() -> RatFn {
    RatFn::constant(super::poly::q(1, 2))
}

/// Canonical expression for a named symbol.
pub fn symbol(name: &str) -> RatFn {
    match name {
        "alpha" | "α" => RatFn::var(ALPHA),
        "eps" | "ε" | "epsilon" => RatFn::var(EPS),
        "H(A)" => h_a(),
        "H(A|B)" => h_a_given_b(),
        "I(A:R)" => RatFn::var(I_AR),
        "I(A:B)" => RatFn::var(I_AB),
        "Ic" | "I_c" | "Ic(A>B)" => h_a_given_b().neg(),
        "Hmax(A)" => RatFn::var(HMAX),
        "Hmin(A|R)" => h_min_a_given_r(),
        other => RatFn::var(other),
    }
}

pub fn parse_expr(src: &str) -> Result<RatFn, CalculusError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub(super) struct Parser<'a> {
    pub(super) s: &'a [u8],
    pub(super) src: &'a str,
    pub(super) pos: usize,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str) -> Self {
        Parser { s: src.as_bytes(), src, pos: 0 }
    }

    pub(super) fn err(&self, msg: &str) -> CalculusError {
        CalculusError::Parse { input: self.src.to_string(), at: self.pos, msg: msg.to_string() }
    }

    pub(super) fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(super) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(super) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(super) fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    /// Sum of products.
    pub(super) fn expr(&mut self) -> Result<RatFn, CalculusError> {
        let mut acc = self.product()?;
        loop {
            if self.peek_arrow() {
                return Ok(acc);
            }
            if self.eat("+") {
                acc = acc.add(&self.product()?);
            } else if self.eat("-") {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn peek_arrow(&mut self) -> bool {
        self.skip_ws();
        self.rest().starts_with("->")
    }

    /// Products and quotients, with implicit multiplication (`2alpha`, `3(1+alpha)`).
    pub(super) fn product(&mut self) -> Result<RatFn, CalculusError> {
        let mut acc = self.power()?;
        loop {
            if self.eat("*") {
                acc = acc.mul(&self.power()?);
            } else if self.eat("/") {
                let d = self.power()?;
                acc = acc.div(&d).ok_or_else(|| self.err("division by zero"))?;
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        match self.peek() {
            Some(c) => c == '(' || c.is_alphabetic() || c == 'α' || c == 'ε',
            None => false,
        }
    }

    fn power(&mut self) -> Result<RatFn, CalculusError> {
        let base = self.unary()?;
        if self.eat("^") {
            let e = self.number()?;
            let k: u32 = e
                .to_integer()
                .try_into()
                .ok()
                .filter(|_| e.is_integer())
                .ok_or_else(|| self.err("exponent must be a small non-negative integer"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<RatFn, CalculusError> {
        if self.eat("-") {
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RatFn, CalculusError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(RatFn::constant(self.number()?)),
            Some(c) if c.is_alphabetic() => {
                let name = self.ident();
                Ok(symbol(&name))
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }

    /// Decimal literal, converted exactly (`0.01` is `1/100`).
    pub(super) fn number(&mut self) -> Result<Q, CalculusError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        let txt = &self.src[start..self.pos];
        let (int, frac) = txt.split_once('.').unwrap_or((txt, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(self.err("expected a number"));
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| self.err("bad number"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        Ok(Q::new(n, d))
    }

    /// Identifier, including entropy call syntax such as `I(A:R)` or `Hmin(A|R)`.
    fn ident(&mut self) -> String {
        let start = self.pos;
        let mut chars = self.rest().char_indices();
        let mut end = 0;
        for (i, c) in chars.by_ref() {
            if c.is_alphanumeric() || c == '_' {
                end = i + c.len_utf8();
            } else {
                break;
            }
        }
        self.pos = start + end;
        let head = &self.src[start..self.pos];
        // Entropic functionals take a parenthesised argument list of system letters.
        if matches!(head, "H" | "I" | "Hmax" | "Hmin" | "Ic") && self.rest().starts_with('(') {
            if let Some(close) = self.rest().find(')') {
                let arg = &self.rest()[1..close];
                if arg.chars().all(|c| c.is_ascii_uppercase() || ":|>'".contains(c)) && !arg.is_empty() {
                    self.pos += close + 1;
                    return format!("{head}({arg})");
                }
            }
        }
        head.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::poly::q;

    #[test]
    fn pure_state_identities() {
        let lhs = parse_expr("H(A) + H(A|B)").unwrap();
        assert!(lhs.equals(&parse_expr("I(A:R)").unwrap()));
        let x = parse_expr("2alpha(1+alpha)/(1+alpha)").unwrap();
        assert!(x.equals(&parse_expr("alpha*2").unwrap()));
        assert_eq!(parse_expr("0.01").unwrap().as_constant(), Some(q(1, 100)));
        assert!(parse_expr("1/0").is_err());
    }
}
