//! First-order encodings of the interpretation conditions with unknown
//! coefficients, for external solvers.
//!
//! A document has the shape `exists coefficients . forall variables . M`.
//! Each symbol gets a template: constructors are additive with an unknown
//! constant, defined symbols are a max of `k` polynomials of degree at most
//! `d` with one unknown per monomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::assignment::Assignment;
use crate::deppairs::dependency_pairs;
use crate::error::{Error, Result};
use crate::maxpoly::{Exponents, MaxPolyFn, Poly};
use crate::scalar::Scalar;
use crate::trs::{Name, SymbolKind, Term, Trs};
use crate::verifier::{verify, Criterion, PiMode, Report, VerifyOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Scalar),
    Coef(String),
    Var(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Max(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Geq(Expr, Expr),
    Gt(Expr, Expr),
    Eq(Expr, Expr),
    And(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// Values for coefficients and variables. Unlike [`Scalar`], differences may
/// be negative, so plain big rationals are used.
pub type Env = HashMap<String, Scalar>;

impl Expr {
    fn sum(mut xs: Vec<Expr>) -> Expr {
        if xs.len() == 1 {
            xs.pop().expect("one element")
        } else {
            Expr::Add(xs)
        }
    }

    pub fn eval(&self, env: &Env) -> Result<Scalar> {
        Ok(match self {
            Expr::Num(c) => c.clone(),
            Expr::Coef(n) | Expr::Var(n) => env
                .get(n)
                .cloned()
                .ok_or_else(|| Error::MissingCoefficient(n.clone()))?,
            Expr::Add(xs) => xs.iter().map(|x| x.eval(env)).sum::<Result<Scalar>>()?,
            Expr::Mul(xs) => xs.iter().map(|x| x.eval(env)).product::<Result<Scalar>>()?,
            Expr::Max(xs) => xs
                .iter()
                .map(|x| x.eval(env))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or_default(),
        })
    }
}

impl Formula {
    pub fn eval(&self, env: &Env) -> Result<bool> {
        Ok(match self {
            Formula::Geq(a, b) => a.eval(env)? >= b.eval(env)?,
            Formula::Gt(a, b) => a.eval(env)? > b.eval(env)?,
            Formula::Eq(a, b) => a.eval(env)? == b.eval(env)?,
            Formula::And(fs) => {
                for f in fs {
                    if !f.eval(env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Implies(a, b) => !a.eval(env)? || b.eval(env)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodedKind {
    Subterm,
    Monotonicity,
    StrictMonotonicity,
    Rule,
    DependencyPair,
}

/// One universally quantified condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub kind: EncodedKind,
    pub description: String,
    /// Universal variables, unique across the document.
    pub vars: Vec<String>,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTemplate {
    pub arity: usize,
    /// Per branch, the monomials with their unknown coefficient names. A
    /// `None` coefficient is the fixed value 1 (the argument sums of
    /// constructor templates).
    pub branches: Vec<Vec<(Exponents, Option<String>)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaDoc {
    pub criterion: Criterion,
    pub pi_mode: Option<PiMode>,
    pub k: usize,
    pub d: u32,
    pub relax_nullary: Option<Scalar>,
    pub templates: BTreeMap<String, SymbolTemplate>,
    /// Existential unknowns in declaration order.
    pub coefficients: Vec<String>,
    /// Quantifier-free conditions on the coefficients alone.
    pub side: Vec<Formula>,
    pub conditions: Vec<Condition>,
}

/// Name of the strict-decrease constant in the `Delta` PI mode.
pub const DELTA: &str = "delta";

fn clean(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Exponent vectors with total degree at most `d`, by degree then lexicographically.
pub fn monomial_support(arity: usize, d: u32) -> Vec<Exponents> {
    let mut out: Vec<Exponents> = Vec::new();
    fn rec(arity: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if prefix.len() == arity {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(arity, left - e, prefix, out);
            prefix.pop();
        }
    }
    rec(arity, d, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

fn coef_name(symbol: &str, branch: usize, e: &[u32]) -> String {
    let mut s = format!("a_{}_{}", clean(symbol), branch);
    for j in e {
        let _ = write!(s, "_{j}");
    }
    s
}

impl SymbolTemplate {
    /// The template as an expression in `args`.
    fn apply(&self, args: &[Expr]) -> Expr {
        let branches: Vec<Expr> = self
            .branches
            .iter()
            .map(|monos| {
                let terms: Vec<Expr> = monos
                    .iter()
                    .map(|(e, c)| {
                        let mut factors: Vec<Expr> =
                            c.iter().map(|n| Expr::Coef(n.clone())).collect();
                        for (i, &k) in e.iter().enumerate() {
                            factors.extend(std::iter::repeat_n(args[i].clone(), k as usize));
                        }
                        match factors.len() {
                            0 => Expr::Num(Scalar::one()),
                            1 => factors.pop().expect("one factor"),
                            _ => Expr::Mul(factors),
                        }
                    })
                    .collect();
                Expr::sum(terms)
            })
            .collect();
        if branches.len() == 1 {
            branches.into_iter().next().expect("one branch")
        } else {
            Expr::Max(branches)
        }
    }

    /// The function obtained by fixing every coefficient from `model`.
    pub fn instantiate(&self, model: &Env) -> Result<MaxPolyFn> {
        let mut polys = Vec::new();
        for monos in &self.branches {
            let mut p = Poly::zero(self.arity);
            for (e, c) in monos {
                let v = match c {
                    None => Scalar::one(),
                    Some(n) => model
                        .get(n)
                        .cloned()
                        .ok_or_else(|| Error::MissingCoefficient(n.clone()))?,
                };
                p = p.add(&Poly::monomial(self.arity, e.clone(), v));
            }
            polys.push(p);
        }
        Ok(MaxPolyFn::new(self.arity, polys))
    }
}

fn term_expr(doc: &FormulaDoc, t: &Term, vars: &HashMap<Name, String>) -> Expr {
    match t {
        Term::Var(x) => Expr::Var(vars[x].clone()),
        Term::App(f, args) => {
            let args: Vec<Expr> = args.iter().map(|a| term_expr(doc, a, vars)).collect();
            doc.templates[&**f].apply(&args)
        }
    }
}

/// Builds the encoding of `criterion` for templates with `k` branches of
/// degree at most `d`.
pub fn encode(
    trs: &Trs,
    criterion: Criterion,
    pi_mode: PiMode,
    k: usize,
    d: u32,
    relax_nullary: Option<Scalar>,
) -> Result<FormulaDoc> {
    if k == 0 {
        return Err(Error::InvalidValue("at least one branch is needed".into()));
    }
    let mut doc = FormulaDoc {
        criterion,
        pi_mode: (criterion == Criterion::Pi).then_some(pi_mode),
        k,
        d,
        relax_nullary: relax_nullary.clone(),
        templates: BTreeMap::new(),
        coefficients: Vec::new(),
        side: Vec::new(),
        conditions: Vec::new(),
    };
    let zero = || Expr::Num(Scalar::zero());
    for s in trs.signature() {
        let tpl = if s.kind == SymbolKind::Constructor {
            let c = coef_name(&s.name, 1, &vec![0; s.arity]);
            let coef = Expr::Coef(c.clone());
            if s.arity == 0 {
                doc.side.push(match &relax_nullary {
                    None => Formula::Eq(coef, zero()),
                    Some(b) => Formula::Geq(Expr::Num(b.clone()), coef),
                });
            } else {
                doc.side.push(Formula::Geq(coef, Expr::Num(Scalar::one())));
            }
            doc.coefficients.push(c.clone());
            let mut monos = vec![(vec![0; s.arity], Some(c))];
            for i in 0..s.arity {
                let mut e = vec![0; s.arity];
                e[i] = 1;
                monos.push((e, None));
            }
            SymbolTemplate {
                arity: s.arity,
                branches: vec![monos],
            }
        } else {
            let support = monomial_support(s.arity, d);
            let branches = (1..=k)
                .map(|i| {
                    support
                        .iter()
                        .map(|e| {
                            let c = coef_name(&s.name, i, e);
                            doc.coefficients.push(c.clone());
                            (e.clone(), Some(c))
                        })
                        .collect()
                })
                .collect();
            SymbolTemplate {
                arity: s.arity,
                branches,
            }
        };
        doc.templates.insert(s.name.to_string(), tpl);
    }
    for c in &doc.coefficients {
        doc.side.push(Formula::Geq(Expr::Coef(c.clone()), zero()));
    }
    if pi_mode == PiMode::Delta && criterion == Criterion::Pi {
        doc.coefficients.push(DELTA.into());
        doc.side.push(Formula::Gt(Expr::Coef(DELTA.into()), zero()));
    }

    let mut fresh = 0usize;
    let mut fresh_vars = |n: usize| -> Vec<String> {
        fresh += 1;
        (1..=n).map(|i| format!("x{fresh}_{i}")).collect()
    };
    let strict_pi = criterion == Criterion::Pi;

    for s in trs.signature() {
        let tpl = doc.templates[&*s.name].clone();
        if s.arity == 0 {
            continue;
        }
        let subterm_margin = match (criterion, pi_mode) {
            (Criterion::Qi, _) => Some(false),
            (Criterion::Pi, PiMode::Subterm) => Some(true),
            _ => None,
        };
        if let Some(strict) = subterm_margin {
            for i in 0..s.arity {
                let vs = fresh_vars(s.arity);
                let args: Vec<Expr> = vs.iter().map(|v| Expr::Var(v.clone())).collect();
                let (lhs, rhs) = (tpl.apply(&args), args[i].clone());
                doc.conditions.push(Condition {
                    kind: EncodedKind::Subterm,
                    description: format!("{} dominates argument {}", s.name, i + 1),
                    vars: vs,
                    body: if strict {
                        Formula::Gt(lhs, rhs)
                    } else {
                        Formula::Geq(lhs, rhs)
                    },
                });
            }
        }
        // monotonicity: x <= y implies f(x) <= f(y), one argument at a time
        for i in 0..s.arity {
            let mut vs = fresh_vars(s.arity);
            let y = format!("{}_y", vs[i]);
            let xs: Vec<Expr> = vs.iter().map(|v| Expr::Var(v.clone())).collect();
            let mut ys = xs.clone();
            ys[i] = Expr::Var(y.clone());
            let hyp = if strict_pi {
                Formula::Gt(ys[i].clone(), xs[i].clone())
            } else {
                Formula::Geq(ys[i].clone(), xs[i].clone())
            };
            let concl = if strict_pi {
                Formula::Gt(tpl.apply(&ys), tpl.apply(&xs))
            } else {
                Formula::Geq(tpl.apply(&ys), tpl.apply(&xs))
            };
            vs.push(y);
            doc.conditions.push(Condition {
                kind: if strict_pi {
                    EncodedKind::StrictMonotonicity
                } else {
                    EncodedKind::Monotonicity
                },
                description: format!(
                    "{} is {}monotone in argument {}",
                    s.name,
                    if strict_pi { "strictly " } else { "" },
                    i + 1
                ),
                vars: vs,
                body: Formula::Implies(Box::new(hyp), Box::new(concl)),
            });
        }
    }

    let mut pairs: Vec<(EncodedKind, String, Term, Term)> = trs
        .rules()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                EncodedKind::Rule,
                format!("rule {} {}", i + 1, r),
                r.lhs.clone(),
                r.rhs.clone(),
            )
        })
        .collect();
    if criterion == Criterion::Dpi {
        pairs.extend(dependency_pairs(trs).into_iter().map(|p| {
            (
                EncodedKind::DependencyPair,
                format!("pair {p}"),
                p.lhs,
                p.rhs,
            )
        }));
    }
    for (kind, description, lhs, rhs) in pairs {
        let names = lhs.vars();
        let vs = fresh_vars(names.len());
        let map: HashMap<Name, String> = names.iter().cloned().zip(vs.iter().cloned()).collect();
        let l = term_expr(&doc, &lhs, &map);
        let r = term_expr(&doc, &rhs, &map);
        let body = match (criterion, pi_mode) {
            (Criterion::Pi, PiMode::Nat) => {
                Formula::Geq(l, Expr::Add(vec![r, Expr::Num(Scalar::one())]))
            }
            (Criterion::Pi, PiMode::Delta) => {
                Formula::Geq(l, Expr::Add(vec![r, Expr::Coef(DELTA.into())]))
            }
            (Criterion::Pi, PiMode::Subterm) => Formula::Gt(l, r),
            _ => Formula::Geq(l, r),
        };
        doc.conditions.push(Condition {
            kind,
            description,
            vars: vs,
            body,
        });
    }
    Ok(doc)
}

impl FormulaDoc {
    /// The conjunction of all conditions, without the nonnegativity guards.
    pub fn matrix(&self) -> Formula {
        Formula::And(self.conditions.iter().map(|c| c.body.clone()).collect())
    }

    pub fn rule_count(&self) -> usize {
        self.conditions
            .iter()
            .filter(|c| c.kind == EncodedKind::Rule)
            .count()
    }

    /// Assignment read off a model of the coefficients.
    pub fn assignment(&self, model: &Env) -> Result<Assignment> {
        let mut a = Assignment::new();
        for (name, tpl) in &self.templates {
            a.insert(name.as_str(), tpl.instantiate(model)?);
        }
        Ok(a)
    }
}

/// Substitutes `model` into the templates and runs the verifier on the result.
pub fn check_model(
    trs: &Trs,
    doc: &FormulaDoc,
    model: &Env,
    opts: &VerifyOptions,
) -> Result<Report> {
    for c in &doc.coefficients {
        if !model.contains_key(c) {
            return Err(Error::MissingCoefficient(c.clone()));
        }
    }
    let a = doc.assignment(model)?;
    let mut opts = opts.clone();
    if opts.relax_nullary.is_none() {
        opts.relax_nullary = doc.relax_nullary.clone();
    }
    if let (Some(mode), Some(delta)) = (doc.pi_mode, model.get(DELTA)) {
        if mode == PiMode::Delta {
            opts.delta = delta.clone();
        }
    }
    match doc.pi_mode {
        Some(mode) => verify(
            trs,
            &a,
            Criterion::Pi,
            &VerifyOptions {
                pi_mode: mode,
                ..opts
            },
        ),
        None => verify(trs, &a, doc.criterion, &opts),
    }
}

/// Branch count and degree implied by the coefficient names of `model`, for
/// rebuilding the document a solver answered. Defaults to `(1, 0)`.
pub fn template_shape(trs: &Trs, model: &Env) -> (usize, u32) {
    let (mut k, mut d) = (1usize, 0u32);
    for s in trs.defined() {
        let prefix = format!("a_{}_", clean(&s.name));
        for name in model.keys() {
            let Some(rest) = name.strip_prefix(&prefix) else {
                continue;
            };
            let parts: Option<Vec<u32>> = rest.split('_').map(|p| p.parse().ok()).collect();
            match parts {
                Some(p) if p.len() == s.arity + 1 => {
                    k = k.max(p[0] as usize);
                    d = d.max(p[1..].iter().sum());
                }
                _ => {}
            }
        }
    }
    (k, d)
}

fn smt_symbol(name: &str) -> String {
    if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.starts_with(|c: char| c.is_ascii_digit())
    {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn smt_num(c: &Scalar) -> String {
    if c.is_integer() {
        format!("{}.0", c.numer())
    } else {
        format!("(/ {}.0 {}.0)", c.numer(), c.denom())
    }
}

struct Smt<'a>(&'a Expr);

impl fmt::Display for Smt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, xs: &[Expr]| -> fmt::Result {
            write!(f, "({op}")?;
            for x in xs {
                write!(f, " {}", Smt(x))?;
            }
            write!(f, ")")
        };
        match self.0 {
            Expr::Num(c) => f.write_str(&smt_num(c)),
            Expr::Coef(n) | Expr::Var(n) => f.write_str(&smt_symbol(n)),
            Expr::Add(xs) => list(f, "+", xs),
            Expr::Mul(xs) => list(f, "*", xs),
            Expr::Max(xs) => {
                // fold into nested binary max
                let (last, rest) = xs.split_last().expect("nonempty max");
                for x in rest {
                    write!(f, "(max2 {} ", Smt(x))?;
                }
                write!(f, "{}", Smt(last))?;
                for _ in rest {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

struct SmtF<'a>(&'a Formula);

impl fmt::Display for SmtF<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Geq(a, b) => write!(f, "(>= {} {})", Smt(a), Smt(b)),
            Formula::Gt(a, b) => write!(f, "(> {} {})", Smt(a), Smt(b)),
            Formula::Eq(a, b) => write!(f, "(= {} {})", Smt(a), Smt(b)),
            Formula::And(fs) if fs.is_empty() => write!(f, "true"),
            Formula::And(fs) => {
                write!(f, "(and")?;
                for x in fs {
                    write!(f, "\n    {}", SmtF(x))?;
                }
                write!(f, ")")
            }
            Formula::Implies(a, b) => write!(f, "(=> {} {})", SmtF(a), SmtF(b)),
        }
    }
}

/// SMT-LIB 2 script: coefficients are declared constants and all conditions
/// sit under a single universal quantifier.
pub fn emit_smtlib(doc: &FormulaDoc) -> String {
    let mut out = String::new();
    let mode = doc
        .pi_mode
        .map(|m| format!(" {m:?}").to_lowercase())
        .unwrap_or_default();
    let _ = writeln!(out, "; {}{} k={} d={}", doc.criterion, mode, doc.k, doc.d);
    let _ = writeln!(out, "(set-logic NRA)");
    let _ = writeln!(
        out,
        "(define-fun max2 ((a Real) (b Real)) Real (ite (>= a b) a b))"
    );
    for c in &doc.coefficients {
        let _ = writeln!(out, "(declare-const {} Real)", smt_symbol(c));
    }
    for s in &doc.side {
        let _ = writeln!(out, "(assert {})", SmtF(s));
    }
    let vars: Vec<&String> = doc.conditions.iter().flat_map(|c| &c.vars).collect();
    for c in &doc.conditions {
        let _ = writeln!(out, "; {}", c.description);
    }
    let matrix = doc.matrix();
    if vars.is_empty() {
        let _ = writeln!(out, "(assert {})", SmtF(&matrix));
    } else {
        let binders: Vec<String> = vars
            .iter()
            .map(|v| format!("({} Real)", smt_symbol(v)))
            .collect();
        let guards: Vec<String> = vars
            .iter()
            .map(|v| format!("(>= {} 0.0)", smt_symbol(v)))
            .collect();
        let _ = writeln!(out, "(assert (forall ({})", binders.join(" "));
        let _ = writeln!(out, "  (=> (and {})", guards.join(" "));
        let _ = writeln!(out, "  {})))", SmtF(&matrix));
    }
    let _ = writeln!(out, "(check-sat)");
    let _ = writeln!(out, "(get-model)");
    out
}

/// Reads `(define-fun name () Real value)` entries of a solver model. Values
/// may be decimals, integers, or `(/ p q)`; negative values are rejected.
pub fn parse_model(text: &str) -> Result<Env> {
    let toks = tokenize(text);
    let mut env = Env::new();
    let mut i = 0;
    while i < toks.len() {
        if toks[i] == "define-fun" {
            let name = toks.get(i + 1).ok_or_else(|| bad("truncated define-fun"))?;
            let name = name.trim_matches('|').to_string();
            // skip `(` `)` `Real`
            let mut j = i + 2;
            while j < toks.len() && toks[j] != "Real" {
                j += 1;
            }
            let (value, next) = parse_value(&toks, j + 1)?;
            env.insert(name, value);
            i = next;
        } else {
            i += 1;
        }
    }
    Ok(env)
}

fn bad(msg: &str) -> Error {
    Error::InvalidValue(format!("model: {msg}"))
}

fn tokenize(text: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in text.chars() {
        if quoted {
            cur.push(ch);
            quoted = ch != '|';
            continue;
        }
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            '|' => {
                quoted = true;
                cur.push(ch);
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks
}

fn parse_value(toks: &[String], i: usize) -> Result<(Scalar, usize)> {
    let t = toks.get(i).ok_or_else(|| bad("missing value"))?;
    if t != "(" {
        let v: Scalar = t
            .parse()
            .map_err(|_| bad(&format!("unsupported value `{t}`")))?;
        return Ok((v, i + 1));
    }
    let op = toks.get(i + 1).ok_or_else(|| bad("missing operator"))?;
    match op.as_str() {
        "/" => {
            let (p, j) = parse_value(toks, i + 2)?;
            let (q, j) = parse_value(toks, j)?;
            if q.is_zero() {
                return Err(bad("division by zero"));
            }
            let v = Scalar::from_rational(p.as_rational() / q.as_rational()).expect("nonnegative");
            expect_close(toks, j).map(|j| (v, j))
        }
        "-" => {
            let (v, j) = parse_value(toks, i + 2)?;
            if v.is_zero() {
                return expect_close(toks, j).map(|j| (v, j));
            }
            Err(bad("negative coefficient"))
        }
        other => Err(bad(&format!("unsupported value form `{other}`"))),
    }
}

fn expect_close(toks: &[String], j: usize) -> Result<usize> {
    if toks.get(j).map(String::as_str) == Some(")") {
        Ok(j + 1)
    } else {
        Err(bad("expected `)`"))
    }
}
