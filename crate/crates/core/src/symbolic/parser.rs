//! Tiny expression parser producing [`PolyFrac`] values.
//!
//! Grammar: sums of products of signed atoms with `^` powers; atoms are
//! integers, variable names, or parenthesized expressions. This is the
//! dialect used by the checked-in claims fixture.

use super::mpoly::{MPoly, PolyFrac};
use crate::field::Field;
use num::bigint::BigInt;
use num::rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().map_err(|_| "bad number")?));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PolyFrac, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PolyFrac, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc
                        .div(&rhs)
                        .ok_or_else(|| "division by zero expression".to_string())?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyFrac, String> {
        let mut neg = false;
        while let Some(Tok::Minus) = self.peek() {
            self.next();
            neg = !neg;
        }
        let mut base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.to_string().parse().map_err(|_| "bad exponent")?;
                    base = PolyFrac::new(base.num.pow(k), base.den.pow(k));
                }
                _ => return Err("expected integer exponent after ^".into()),
            }
        }
        Ok(if neg { base.neg() } else { base })
    }

    fn atom(&mut self) -> Result<PolyFrac, String> {
        let n = self.vars.len();
        match self.next() {
            Some(Tok::Num(v)) => Ok(PolyFrac::from_poly(MPoly::constant(
                n,
                BigRational::from(v),
            ))),
            Some(Tok::Ident(name)) => {
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| format!("unknown variable `{name}`"))?;
                Ok(PolyFrac::from_poly(MPoly::var(n, idx)))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("missing closing parenthesis".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

/// Parse an expression over the given variable names.
pub fn parse_poly_frac(input: &str, vars: &[&str]) -> Result<PolyFrac, String> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing tokens in `{input}`"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::One;

    #[test]
    fn parses_rational_functions() {
        let vars = ["lambda", "t"];
        let e = parse_poly_frac("(lambda-1)/lambda", &vars).unwrap();
        let v = e
            .eval(&[BigRational::from(BigInt::from(3)), BigRational::one()])
            .unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert!(parse_poly_frac("t*(1/t) - 1", &vars).unwrap().is_zero());
        assert!(parse_poly_frac("nope", &vars).is_err());
    }
}
