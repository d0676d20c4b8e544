//! Parser and printer for polynomial / rational-function expressions in a
//! small ASCII grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := IDENT | INT | '(' expr ')'
//! ```
//!
//! Examples: `x^2*y + 3`, `(x^2+y^2)/y^2`. The parser never panics on
//! malformed input; everything surfaces as a [`ExprError`].

use crate::poly::ratfunc::RatFunc;
use crate::scalar::PrimeBase;
use std::fmt;
use std::sync::Arc;

const MAX_EXPONENT: u64 = 4096;
const MAX_DEPTH: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ExprError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        offset,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ExprError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let start = self.pos;
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((start, Tok::Plus));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((start, Tok::Minus));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((start, Tok::Star));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((start, Tok::Slash));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((start, Tok::Caret));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((start, Tok::LParen));
                    self.pos += 1;
                }
                b')' => {
                    out.push((start, Tok::RParen));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let mut v: u64 = 0;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add((self.src[self.pos] - b'0') as u64))
                            .ok_or(ExprError {
                                offset: start,
                                message: "integer literal too large".into(),
                            })?;
                        self.pos += 1;
                    }
                    out.push((start, Tok::Int(v)));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let mut end = self.pos;
                    while end < self.src.len()
                        && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                    {
                        end += 1;
                    }
                    let name = std::str::from_utf8(&self.src[self.pos..end])
                        .expect("ascii range")
                        .to_string();
                    self.pos = end;
                    out.push((start, Tok::Ident(name)));
                }
                _ => return err(start, format!("unexpected character {:?}", c as char)),
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    base: PrimeBase,
    vars: Arc<Vec<String>>,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self, depth: usize) -> Result<RatFunc, ExprError> {
        if depth > MAX_DEPTH {
            return err(self.offset(), "expression nested too deeply");
        }
        let mut acc = self.term(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term(depth + 1)?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term(depth + 1)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<RatFunc, ExprError> {
        if depth > MAX_DEPTH {
            return err(self.offset(), "expression nested too deeply");
        }
        let mut acc = self.unary(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary(depth + 1)?);
                }
                Some(Tok::Slash) => {
                    let off = self.offset();
                    self.bump();
                    let rhs = self.unary(depth + 1)?;
                    acc = acc.div(&rhs).map_err(|_| ExprError {
                        offset: off,
                        message: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self, depth: usize) -> Result<RatFunc, ExprError> {
        if depth > MAX_DEPTH {
            return err(self.offset(), "expression nested too deeply");
        }
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(self.unary(depth + 1)?.neg());
        }
        self.power(depth + 1)
    }

    fn power(&mut self, depth: usize) -> Result<RatFunc, ExprError> {
        let base = self.atom(depth + 1)?;
        let mut acc = base;
        while matches!(self.peek(), Some(Tok::Caret)) {
            let off = self.offset();
            self.bump();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    if e > MAX_EXPONENT {
                        return err(off, format!("exponent {e} exceeds limit {MAX_EXPONENT}"));
                    }
                    acc = acc.pow(e as u32);
                }
                _ => return err(off, "expected integer exponent after '^'"),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self, depth: usize) -> Result<RatFunc, ExprError> {
        if depth > MAX_DEPTH {
            return err(self.offset(), "expression nested too deeply");
        }
        let off = self.offset();
        match self.bump() {
            Some(Tok::Int(v)) => {
                if v > i64::MAX as u64 {
                    return err(off, "integer literal too large");
                }
                Ok(RatFunc::constant(
                    self.base,
                    self.vars.clone(),
                    self.base.from_integer(v as i64),
                ))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(RatFunc::var(self.base, self.vars.clone(), i)),
                None => err(off, format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                let inner = self.expr(depth + 1)?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => err(off, "unclosed parenthesis"),
                }
            }
            Some(t) => err(off, format!("unexpected token {t:?}")),
            None => err(off, "unexpected end of expression"),
        }
    }
}

/// Parse an expression over a fixed, ordered variable list.
pub fn parse_ratfunc(
    src: &str,
    base: PrimeBase,
    vars: Arc<Vec<String>>,
) -> Result<RatFunc, ExprError> {
    let toks = Lexer::new(src).tokens()?;
    let end = src.len();
    let mut p = Parser {
        toks,
        at: 0,
        base,
        vars,
        end,
    };
    let r = p.expr(0)?;
    if p.at != p.toks.len() {
        return err(p.offset(), "trailing input after expression");
    }
    Ok(r)
}

/// Identifiers appearing in an expression, in order of first appearance.
/// Used to assemble variable lists before a fixed-variable parse.
pub fn scan_idents(src: &str) -> Result<Vec<String>, ExprError> {
    let toks = Lexer::new(src).tokens()?;
    let mut out: Vec<String> = Vec::new();
    for (_, t) in toks {
        if let Tok::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

/// Parse over whatever variables occur, ordered lexicographically.
pub fn parse_ratfunc_free(src: &str, base: PrimeBase) -> Result<RatFunc, ExprError> {
    let mut names = scan_idents(src)?;
    names.sort();
    parse_ratfunc(src, base, Arc::new(names))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Arc<Vec<String>> {
        Arc::new(names.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn parses_spec_examples() {
        let vs = vars(&["x", "y"]);
        let b = PrimeBase::Rational;
        let e1 = parse_ratfunc("x^2*y + 3", b, vs.clone()).unwrap();
        assert_eq!(format!("{e1}"), "x^2*y + 3");
        let p2 = PrimeBase::Prime(2);
        let e2 = parse_ratfunc("(x^2+y^2)/y^2", p2, vs.clone()).unwrap();
        assert_eq!(format!("{e2}"), "(x^2 + y^2)/y^2");
    }

    #[test]
    fn round_trips_through_display() {
        let vs = vars(&["x", "y"]);
        let b = PrimeBase::Prime(2);
        for src in ["x^2*y + 3", "(x^2+y^2)/y^2", "x/y + 1", "x^4*y^4"] {
            let v = parse_ratfunc(src, b, vs.clone()).unwrap();
            let printed = format!("{v}");
            let again = parse_ratfunc(&printed, b, vs.clone()).unwrap();
            assert_eq!(v, again, "{src} -> {printed}");
        }
    }

    #[test]
    fn rejects_garbage_without_panicking() {
        let vs = vars(&["x"]);
        let b = PrimeBase::Rational;
        for bad in ["", "x +", "(((", "x ^ y", "x^99999999", "1/0", "$", "q"] {
            assert!(parse_ratfunc(bad, b, vs.clone()).is_err(), "{bad}");
        }
    }
}
