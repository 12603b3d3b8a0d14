//! Operator text syntax: `x1*dx1 + 2*x2*dx2 - 5`, `3/7*x1^2`, `(dx1 - 1)^2`.
//! Multiplication is always explicit.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::weyl::{Ctx, FreeVector, OpMatrix, Weyl};
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

/// A token stream over some source text, tracking line and column.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src, pos: 0, line: 1, col: 1 }
    }

    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let c = bytes[self.pos];
            if c == b'#' {
                while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                    self.bump();
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn bump(&mut self) {
        if self.src.as_bytes()[self.pos] == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col, msg: msg.into() })
    }

    pub fn location(&self) -> (usize, usize) {
        (self.line, self.col)
    }

    pub fn peek(&mut self) -> Tok {
        self.skip_ws();
        let save = (self.pos, self.line, self.col);
        let t = self.lex();
        (self.pos, self.line, self.col) = save;
        t
    }

    /// Looks two tokens ahead.
    pub fn peek2(&mut self) -> (Tok, Tok) {
        self.skip_ws();
        let save = (self.pos, self.line, self.col);
        let a = self.lex();
        self.skip_ws();
        let b = self.lex();
        (self.pos, self.line, self.col) = save;
        (a, b)
    }

    pub fn next_tok(&mut self) -> Tok {
        self.skip_ws();
        self.lex()
    }

    fn lex(&mut self) -> Tok {
        let bytes = self.src.as_bytes();
        if self.pos >= bytes.len() {
            return Tok::End;
        }
        let c = bytes[self.pos];
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.bump();
            }
            let v: BigInt = self.src[start..self.pos].parse().expect("digits");
            return Tok::Num(v);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.bump();
            }
            return Tok::Ident(self.src[start..self.pos].to_string());
        }
        let ch = self.src[self.pos..].chars().next().expect("char");
        for _ in 0..ch.len_utf8() {
            self.bump();
        }
        Tok::Sym(ch)
    }

    pub fn at_end(&mut self) -> bool {
        self.peek() == Tok::End
    }

    pub fn expect_sym(&mut self, s: char) -> Result<()> {
        match self.next_tok() {
            Tok::Sym(c) if c == s => Ok(()),
            t => self.error(format!("expected '{s}', found {}", describe(&t))),
        }
    }

    pub fn eat_sym(&mut self, s: char) -> bool {
        if self.peek() == Tok::Sym(s) {
            self.next_tok();
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.next_tok() {
            Tok::Ident(s) => Ok(s),
            t => self.error(format!("expected identifier, found {}", describe(&t))),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.next_tok() {
            Tok::Ident(s) if s == kw => Ok(()),
            t => self.error(format!("expected '{kw}', found {}", describe(&t))),
        }
    }

    pub fn expect_int(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        match self.next_tok() {
            Tok::Num(v) => match v.to_i64() {
                Some(k) => Ok(if neg { -k } else { k }),
                None => self.error("integer too large"),
            },
            t => self.error(format!("expected integer, found {}", describe(&t))),
        }
    }

    /// Parses a sum of products in `ctx`.
    pub fn expr(&mut self, ctx: &Ctx) -> Result<Weyl> {
        let mut acc = if self.eat_sym('-') { -self.product(ctx)? } else { self.product(ctx)? };
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.product(ctx)?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.product(ctx)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self, ctx: &Ctx) -> Result<Weyl> {
        let mut acc = self.power(ctx)?;
        loop {
            if self.eat_sym('*') {
                acc = &acc * &self.power(ctx)?;
                continue;
            }
            match self.peek() {
                Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') => {
                    return self.error("implicit multiplication; write '*'");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self, ctx: &Ctx) -> Result<Weyl> {
        let base = self.atom(ctx)?;
        if self.eat_sym('^') {
            let k = self.expect_int()?;
            if !(0..=1000).contains(&k) {
                return self.error("exponent out of range");
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self, ctx: &Ctx) -> Result<Weyl> {
        match self.next_tok() {
            Tok::Num(a) => {
                let mut q = Q::from_integer(a);
                if self.peek() == Tok::Sym('/') {
                    self.next_tok();
                    match self.next_tok() {
                        Tok::Num(b) if !b.is_zero() => q /= Q::from_integer(b),
                        _ => return self.error("expected nonzero denominator"),
                    }
                }
                Ok(Weyl::constant(ctx, q))
            }
            Tok::Ident(s) => match ctx.lookup(&s) {
                Some((i, false)) => Ok(Weyl::x(ctx, i)),
                Some((i, true)) => Ok(Weyl::d(ctx, i)),
                None => self.error(format!("unknown variable '{s}'")),
            },
            Tok::Sym('(') => {
                let e = self.expr(ctx)?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('-') => Ok(-self.atom(ctx)?),
            t => self.error(format!("unexpected {}", describe(&t))),
        }
    }

    /// `[e1, e2, ...]`, or a bare expression for rank one.
    pub fn vector(&mut self, ctx: &Ctx, rank: usize) -> Result<FreeVector> {
        if self.eat_sym('[') {
            let mut v = Vec::new();
            if !self.eat_sym(']') {
                loop {
                    v.push(self.expr(ctx)?);
                    if self.eat_sym(']') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            if v.len() != rank {
                return self.error(format!("expected {rank} entries, found {}", v.len()));
            }
            Ok(FreeVector::new(ctx, v))
        } else if rank == 1 {
            Ok(FreeVector::new(ctx, alloc::vec![self.expr(ctx)?]))
        } else {
            self.error(format!("expected '[' for a vector of rank {rank}"))
        }
    }

    /// `{ row, row, ... }` or, for a single row, a bare vector.
    pub fn matrix(&mut self, ctx: &Ctx, rows: usize, cols: usize) -> Result<OpMatrix> {
        let mut rv = Vec::new();
        if self.eat_sym('{') {
            if !self.eat_sym('}') {
                loop {
                    rv.push(self.vector(ctx, cols)?);
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
        } else {
            rv.push(self.vector(ctx, cols)?);
        }
        if rv.len() != rows {
            return self.error(format!("expected {rows} rows, found {}", rv.len()));
        }
        Ok(OpMatrix::from_rows(ctx, cols, &rv))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

pub fn parse_weyl(ctx: &Ctx, s: &str) -> Result<Weyl> {
    let mut c = Cursor::new(s);
    let w = c.expr(ctx)?;
    if !c.at_end() {
        return c.error("trailing input");
    }
    Ok(w)
}

pub fn parse_vector(ctx: &Ctx, rank: usize, s: &str) -> Result<FreeVector> {
    let mut c = Cursor::new(s);
    let v = c.vector(ctx, rank)?;
    if !c.at_end() {
        return c.error("trailing input");
    }
    Ok(v)
}

/// Shorthand used throughout the tests: panics on malformed input.
pub fn w(ctx: &Ctx, s: &str) -> Weyl {
    match parse_weyl(ctx, s) {
        Ok(v) => v,
        Err(e) => panic!("bad operator {s:?}: {e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let c = Ctx::std(2);
        for s in ["x1*dx1 + 2*x2*dx2 - 5", "dx1^2 - dx2", "-3/7*x1^2*dx2 + 1", "0"] {
            assert_eq!(w(&c, s).to_string(), s);
        }
    }

    #[test]
    fn normal_order_on_parse() {
        let c = Ctx::std(2);
        assert_eq!(w(&c, "dx1*x1").to_string(), "x1*dx1 + 1");
    }

    #[test]
    fn errors() {
        let c = Ctx::std(2);
        assert!(parse_weyl(&c, "x3").is_err());
        assert!(parse_weyl(&c, "2x1").is_err());
        assert!(parse_weyl(&c, "x1 x2").is_err());
        assert!(parse_weyl(&c, "1/0").is_err());
    }

    #[test]
    fn doubled_names() {
        let c = Ctx::doubled(1);
        assert_eq!(w(&c, "dy1*y1 - x1").to_string(), "y1*dy1 - x1 + 1");
    }
}
