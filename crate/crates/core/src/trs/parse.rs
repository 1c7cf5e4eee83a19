//! Reader for the plain-text rule format.
//!
//! ```text
//! # comment
//! VARS x y
//! f(s(x)) -> s(f(x))
//! f(0) -> 0
//! ```
//!
//! Without a `VARS` header, a bare identifier is a variable unless it starts
//! with a digit or is applied to arguments somewhere in the file.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Name, Rule, Term, Trs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Arrow,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex_line(text: &str, line: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Spanned {
                    tok: Tok::LParen,
                    line,
                    column,
                });
                i += 1;
            }
            ')' => {
                out.push(Spanned {
                    tok: Tok::RParen,
                    line,
                    column,
                });
                i += 1;
            }
            ',' => {
                out.push(Spanned {
                    tok: Tok::Comma,
                    line,
                    column,
                });
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Spanned {
                    tok: Tok::Arrow,
                    line,
                    column,
                });
                i += 2;
            }
            c if is_ident_char(c) && c != '\'' => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(word),
                    line,
                    column,
                });
            }
            other => {
                return Err(syntax(
                    line,
                    column,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

/// Parse tree before variables and symbols are told apart.
#[derive(Debug, Clone)]
struct Raw {
    name: String,
    args: Option<Vec<Raw>>,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or((self.line, self.end_column))
    }

    fn term(&mut self) -> Result<Raw> {
        let (line, column) = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(syntax(line, column, "expected identifier")),
        };
        self.pos += 1;
        if self.peek() != Some(&Tok::LParen) {
            return Ok(Raw {
                name,
                args: None,
                line,
                column,
            });
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                    args.push(self.term()?);
                }
                Some(Tok::RParen) => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    let (l, c) = self.here();
                    return Err(syntax(l, c, "expected `,` or `)`"));
                }
            }
        }
        Ok(Raw {
            name,
            args: Some(args),
            line,
            column,
        })
    }
}

fn parse_raw_term(toks: &[Spanned], line: usize, end_column: usize) -> Result<(Raw, usize)> {
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_column,
    };
    let t = p.term()?;
    Ok((t, p.pos))
}

fn collect_applied(raw: &Raw, applied: &mut HashSet<String>) {
    if let Some(args) = &raw.args {
        applied.insert(raw.name.clone());
        args.iter().for_each(|a| collect_applied(a, applied));
    }
}

struct Resolver<'a> {
    vars: &'a dyn Fn(&str) -> bool,
    names: HashMap<String, Name>,
}

impl Resolver<'_> {
    fn intern(&mut self, s: &str) -> Name {
        self.names
            .entry(s.to_string())
            .or_insert_with(|| Arc::from(s))
            .clone()
    }

    fn resolve(&mut self, raw: &Raw) -> Result<Term> {
        let name = self.intern(&raw.name);
        if (self.vars)(&raw.name) {
            if raw.args.is_some() {
                return Err(syntax(
                    raw.line,
                    raw.column,
                    format!("variable `{}` applied to arguments", raw.name),
                ));
            }
            return Ok(Term::Var(name));
        }
        let args = match &raw.args {
            None => Vec::new(),
            Some(args) => args
                .iter()
                .map(|a| self.resolve(a))
                .collect::<Result<_>>()?,
        };
        Ok(Term::App(name, args))
    }
}

fn starts_with_digit(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_digit())
}

/// Parses a rule file. Symbol kinds are inferred and the signature is ordered
/// by first occurrence.
pub fn parse_trs(text: &str) -> Result<Trs> {
    let mut header: Option<HashSet<String>> = None;
    let mut raw_rules: Vec<(Raw, Raw)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = lex_line(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        if toks[0].tok == Tok::Ident("VARS".into()) {
            let set = header.get_or_insert_with(HashSet::new);
            for t in &toks[1..] {
                match &t.tok {
                    Tok::Ident(v) => {
                        set.insert(v.clone());
                    }
                    _ => {
                        return Err(syntax(
                            t.line,
                            t.column,
                            "expected variable name in VARS header",
                        ))
                    }
                }
            }
            continue;
        }
        let end = line.chars().count() + 1;
        let (lhs, used) = parse_raw_term(&toks, lineno, end)?;
        let rest = &toks[used..];
        match rest.first() {
            Some(Spanned {
                tok: Tok::Arrow, ..
            }) => {}
            Some(s) => return Err(syntax(s.line, s.column, "expected `->`")),
            None => return Err(syntax(lineno, end, "expected `->`")),
        }
        let rest = &rest[1..];
        let (rhs, used) = parse_raw_term(rest, lineno, end)?;
        if let Some(s) = rest.get(used) {
            return Err(syntax(s.line, s.column, "unexpected trailing input"));
        }
        raw_rules.push((lhs, rhs));
    }

    let mut applied = HashSet::new();
    for (l, r) in &raw_rules {
        collect_applied(l, &mut applied);
        collect_applied(r, &mut applied);
    }
    let is_var: Box<dyn Fn(&str) -> bool> = match header {
        Some(set) => Box::new(move |s: &str| set.contains(s)),
        None => Box::new(move |s: &str| !starts_with_digit(s) && !applied.contains(s)),
    };
    let mut resolver = Resolver {
        vars: &*is_var,
        names: HashMap::new(),
    };
    let mut rules = Vec::with_capacity(raw_rules.len());
    for (l, r) in &raw_rules {
        rules.push(Rule::new(resolver.resolve(l)?, resolver.resolve(r)?));
    }
    Trs::from_rules(rules)
}

/// Parses a standalone term against an existing system. Identifiers that are
/// symbols of the system are read as such; any other bare identifier is a
/// variable.
pub fn parse_term(text: &str, trs: &Trs) -> Result<Term> {
    let toks = lex_line(text.trim_end(), 1)?;
    let end = text.chars().count() + 1;
    let (raw, used) = parse_raw_term(&toks, 1, end)?;
    if let Some(s) = toks.get(used) {
        return Err(syntax(s.line, s.column, "unexpected trailing input"));
    }
    fn convert(raw: &Raw, trs: &Trs) -> Result<Term> {
        match (trs.symbol(&raw.name), &raw.args) {
            (Some(sym), args) => {
                let got = args.as_ref().map_or(0, Vec::len);
                if got != sym.arity {
                    return Err(Error::ArityConflict {
                        name: raw.name.clone(),
                        first: sym.arity,
                        second: got,
                    });
                }
                let args = match args {
                    None => Vec::new(),
                    Some(a) => a.iter().map(|x| convert(x, trs)).collect::<Result<_>>()?,
                };
                Ok(Term::App(sym.name.clone(), args))
            }
            (None, None) if !starts_with_digit(&raw.name) => Ok(Term::var(&raw.name)),
            (None, _) => Err(Error::UnknownSymbol(raw.name.clone())),
        }
    }
    convert(&raw, trs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_system() {
        let trs = parse_trs("f(s(x)) -> s(f(x))\nf(0) -> 0").unwrap();
        assert_eq!(trs.rules().len(), 2);
        assert!(trs.is_defined("f"));
        assert!(trs.is_constructor("s"));
        assert!(trs.is_constructor("0"));
        assert_eq!(trs.rules()[0].lhs.args()[0].args()[0], Term::var("x"));
    }

    #[test]
    fn rejects_unbound_rhs_variable() {
        let err = parse_trs("f(x) -> g(x, y)").unwrap_err();
        assert_eq!(
            err,
            Error::UnboundVariable {
                rule: 1,
                var: "y".into()
            }
        );
    }

    #[test]
    fn rejects_non_pattern_lhs() {
        let err = parse_trs("f(g(x)) -> x\ng(x) -> x").unwrap_err();
        assert!(
            matches!(err, Error::NonPatternLhs { rule: 1, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn rejects_arity_conflict() {
        let err = parse_trs("f(x) -> f(x, x)").unwrap_err();
        assert!(matches!(err, Error::ArityConflict { .. }), "{err:?}");
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_trs("f(0) -> 0\nf(s(x) -> x").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 8,
                message: "expected `,` or `)`".into()
            }
        );
        let err = parse_trs("f(0) 0").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 1,
                    column: 6,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn vars_header_pins_variables() {
        // `nil` would be a variable without the header.
        let trs = parse_trs("VARS x\nlen(nil) -> 0\nlen(cons(x)) -> s(len(x))").unwrap();
        assert!(trs.is_constructor("nil"));
        assert_eq!(trs.rules()[1].lhs.vars(), vec![Arc::<str>::from("x")]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let trs = parse_trs("# doubling\n\nd(0) -> 0 # base\nd(s(x)) -> s(s(d(x)))\n").unwrap();
        assert_eq!(trs.rules().len(), 2);
    }

    #[test]
    fn term_against_signature() {
        let trs = parse_trs("d(0) -> 0\nd(s(x)) -> s(s(d(x)))").unwrap();
        let t = parse_term("d(s(s(0)))", &trs).unwrap();
        assert_eq!(t.size(), 4);
        assert!(parse_term("q(0)", &trs).is_err());
        assert!(parse_term("d(0, 0)", &trs).is_err());
        assert_eq!(parse_term("d(y)", &trs).unwrap().vars().len(), 1);
    }
}
