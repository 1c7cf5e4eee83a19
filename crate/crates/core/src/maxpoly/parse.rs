//! Text form of functions: `max(P, ...)` or a bare polynomial, where a
//! polynomial is a `+`-separated list of monomials such as `3`, `1/2*X1` or
//! `X1^2*X2`.

use super::func::MaxPolyFn;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line: 1,
            column: self.src[..self.pos].chars().count() + 1,
            message: msg.into(),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }
}

fn parse_var(cur: &mut Cursor<'_>, arity: usize) -> Result<(usize, u32)> {
    let at = cur.pos;
    cur.eat('X');
    let digits = cur.take_while(|c| c.is_ascii_digit());
    let index = if digits.is_empty() {
        // bare `X` is allowed for unary functions
        if arity == 1 {
            0
        } else {
            cur.pos = at;
            return Err(cur.err("bare `X` is only allowed for unary functions; use X1..Xn"));
        }
    } else {
        let i: usize = digits.parse().map_err(|_| cur.err("bad variable index"))?;
        if i == 0 || i > arity {
            cur.pos = at;
            return Err(cur.err(format!("variable X{i} out of range for arity {arity}")));
        }
        i - 1
    };
    let exp = if cur.eat('^') {
        let e = cur.take_while(|c| c.is_ascii_digit());
        e.parse::<u32>().map_err(|_| cur.err("expected exponent"))?
    } else {
        1
    };
    Ok((index, exp))
}

fn parse_mono(cur: &mut Cursor<'_>, arity: usize) -> Result<Poly> {
    let mut coeff = Scalar::one();
    let mut exps = vec![0u32; arity];
    let mut first = true;
    loop {
        match cur.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let text = cur.take_while(|c| c.is_ascii_digit() || c == '/' || c == '.');
                let v: Scalar = text
                    .parse()
                    .map_err(|_| cur.err(format!("bad coefficient `{text}`")))?;
                coeff = coeff * v;
            }
            Some('X') => {
                let (i, e) = parse_var(cur, arity)?;
                exps[i] += e;
            }
            _ if first => return Err(cur.err("expected a coefficient or variable")),
            _ => return Err(cur.err("expected a factor after `*`")),
        }
        first = false;
        if !cur.eat('*') {
            break;
        }
    }
    Ok(Poly::monomial(arity, exps, coeff))
}

fn parse_poly(cur: &mut Cursor<'_>, arity: usize) -> Result<Poly> {
    let mut p = parse_mono(cur, arity)?;
    while cur.eat('+') {
        p = p.add(&parse_mono(cur, arity)?);
    }
    Ok(p)
}

/// Parses a function of the given arity.
pub fn parse_fn(text: &str, arity: usize) -> Result<MaxPolyFn> {
    let mut cur = Cursor { src: text, pos: 0 };
    let f = if cur.peek() == Some('m') {
        let word = cur.take_while(|c| c.is_ascii_alphabetic());
        if word != "max" {
            return Err(cur.err(format!("unexpected `{word}`")));
        }
        if !cur.eat('(') {
            return Err(cur.err("expected `(` after max"));
        }
        let mut branches = vec![parse_poly(&mut cur, arity)?];
        while cur.eat(',') {
            branches.push(parse_poly(&mut cur, arity)?);
        }
        if !cur.eat(')') {
            return Err(cur.err("expected `,` or `)`"));
        }
        MaxPolyFn::new(arity, branches)
    } else {
        MaxPolyFn::poly(parse_poly(&mut cur, arity)?)
    };
    if cur.peek().is_some() {
        return Err(cur.err("unexpected trailing input"));
    }
    Ok(f)
}
