//! Symbol-to-function assignments and their structural properties.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maxpoly::{
    check_geq_uniform, parse_fn, refute_by_sampling, Check, MaxPolyFn, Poly, SamplingPlan,
};
use crate::scalar::Scalar;
use crate::trs::{Name, Term, Trs};
use crate::verdict::{Verdict, Witness};

/// Maps symbol names to functions. Marked symbols `f#` share the function of `f`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<String, MaxPolyFn>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: impl Into<String>, f: MaxPolyFn) {
        self.map.insert(symbol.into(), f);
    }

    pub fn get(&self, symbol: &str) -> Option<&MaxPolyFn> {
        self.map.get(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &MaxPolyFn)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Reads `symbol = fn` lines; `#` starts a comment. Arities come from the
    /// signature of `trs`.
    pub fn parse(text: &str, trs: &Trs) -> Result<Assignment> {
        let mut a = Assignment::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((name, body)) = line.split_once('=') else {
                return Err(Error::Syntax {
                    line: idx + 1,
                    column: 1,
                    message: "expected `symbol = function`".into(),
                });
            };
            let name = name.trim();
            let sym = trs
                .symbol(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let offset = raw.find('=').map_or(0, |p| p + 1);
            let f = parse_fn(body, sym.arity).map_err(|e| match e {
                Error::Syntax {
                    column, message, ..
                } => Error::Syntax {
                    line: idx + 1,
                    column: column + offset,
                    message,
                },
                other => other,
            })?;
            a.insert(name, f);
        }
        Ok(a)
    }

    /// Symbols of `trs` without a function, in signature order.
    pub fn missing(&self, trs: &Trs) -> Vec<String> {
        trs.signature()
            .iter()
            .filter(|s| !self.map.contains_key(&*s.name))
            .map(|s| s.name.to_string())
            .collect()
    }

    pub fn require_total(&self, trs: &Trs) -> Result<()> {
        match self.missing(trs).into_iter().next() {
            Some(name) => Err(Error::MissingSymbol(name)),
            None => Ok(()),
        }
    }

    /// Text form in signature order, readable by [`Assignment::parse`].
    pub fn to_text(&self, trs: &Trs) -> String {
        let mut out = String::new();
        for sym in trs.signature() {
            if let Some(f) = self.map.get(&*sym.name) {
                let _ = writeln!(out, "{} = {}", sym.name, f);
            }
        }
        out
    }
}

impl Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.map.iter().map(|(k, v)| (k, v.to_string())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructorCheck {
    pub symbol: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub additive: bool,
    /// Largest additive constant (at least 1), when additive.
    pub k: Option<Scalar>,
    pub constructors: Vec<ConstructorCheck>,
}

/// Additive shape of one constructor function. `Ok(constant)` on success.
pub fn additive_constant(
    f: &MaxPolyFn,
    relax_nullary: Option<&Scalar>,
) -> std::result::Result<Scalar, String> {
    let [p] = f.branches() else {
        return Err(format!("{f} uses max"));
    };
    let n = f.arity();
    let k = p.constant_term();
    if n == 0 {
        return match relax_nullary {
            None if k.is_zero() => Ok(k),
            None => Err(format!("nullary constructor must be 0, got {k}")),
            Some(bound) if &k <= bound => Ok(k),
            Some(bound) => Err(format!(
                "nullary constant {k} exceeds relaxation bound {bound}"
            )),
        };
    }
    if *p != Poly::sum_plus(n, k.clone()) {
        return Err(format!("{f} is not of the form X1 + ... + Xn + k"));
    }
    if k < Scalar::one() {
        return Err(format!("additive constant {k} is below 1"));
    }
    Ok(k)
}

/// Checks that every constructor of `trs` is interpreted additively.
pub fn check_additive(
    a: &Assignment,
    trs: &Trs,
    relax_nullary: Option<&Scalar>,
) -> Result<AdditivityReport> {
    let mut constructors = Vec::new();
    let mut k = Scalar::one();
    for c in trs.constructors() {
        let f = a
            .get(&c.name)
            .ok_or_else(|| Error::MissingSymbol(c.name.to_string()))?;
        match additive_constant(f, relax_nullary) {
            Ok(kc) => {
                k = k.max(kc.clone());
                constructors.push(ConstructorCheck {
                    symbol: c.name.to_string(),
                    ok: true,
                    detail: format!("k = {kc}"),
                });
            }
            Err(detail) => constructors.push(ConstructorCheck {
                symbol: c.name.to_string(),
                ok: false,
                detail,
            }),
        }
    }
    let additive = constructors.iter().all(|c| c.ok);
    Ok(AdditivityReport {
        additive,
        k: additive.then_some(k),
        constructors,
    })
}

/// Nonnegative coefficients make every function monotone, so this always holds.
pub fn check_monotone(a: &Assignment) -> Vec<(String, Check)> {
    a.iter().map(|(s, _)| (s.clone(), Check::Holds)).collect()
}

/// Sufficient criterion: every branch has a pure power of `X{i+1}` with a
/// positive coefficient.
pub fn strictly_monotone_in(f: &MaxPolyFn, i: usize) -> Check {
    let ok = f.branches().iter().all(|b| {
        b.terms().any(|(e, c)| {
            !c.is_zero() && e[i] > 0 && e.iter().enumerate().all(|(j, &k)| j == i || k == 0)
        })
    });
    if ok {
        Check::Holds
    } else {
        Check::Unknown
    }
}

/// Per symbol: holds iff every argument passes [`strictly_monotone_in`].
pub fn check_strictly_monotone(a: &Assignment) -> Vec<(String, Check)> {
    a.iter()
        .map(|(s, f)| {
            let all = (0..f.arity()).all(|i| strictly_monotone_in(f, i).holds());
            (s.clone(), if all { Check::Holds } else { Check::Unknown })
        })
        .collect()
}

fn arg_names(arity: usize) -> Vec<String> {
    (1..=arity).map(|i| format!("X{i}")).collect()
}

/// `f >= X{j+1} + margin`: uniform check first, then sampling for a witness.
pub fn subterm_verdict(f: &MaxPolyFn, j: usize, margin: &Scalar, plan: &SamplingPlan) -> Verdict {
    let n = f.arity();
    let rhs = MaxPolyFn::projection(n, j).add_const(margin);
    if check_geq_uniform(f, &rhs).expect("same arity").holds() {
        return Verdict::Holds;
    }
    match refute_by_sampling(f, &rhs, plan) {
        Some(x) => Verdict::Fails {
            witness: Witness {
                lhs: f.eval_unchecked(&x),
                rhs: rhs.eval_unchecked(&x),
                point: arg_names(n).into_iter().zip(x).collect(),
            },
        },
        None => Verdict::Unknown,
    }
}

/// The subterm property, per symbol and argument (1-based in the result).
pub fn check_subterm(a: &Assignment, plan: &SamplingPlan) -> Vec<(String, usize, Verdict)> {
    let mut out = Vec::new();
    for (s, f) in a.iter() {
        for j in 0..f.arity() {
            out.push((
                s.clone(),
                j + 1,
                subterm_verdict(f, j, &Scalar::zero(), plan),
            ));
        }
    }
    out
}

/// The function denoted by `t`, whose variables are read as `X1..Xn` in the
/// order of `vars`. Branches dominated by another branch are dropped.
pub fn extend_to_term(a: &Assignment, t: &Term, vars: &[Name]) -> Result<MaxPolyFn> {
    let n = vars.len();
    match t {
        Term::Var(x) => {
            let i = vars.iter().position(|v| v == x).ok_or_else(|| {
                Error::InvalidValue(format!("variable `{x}` not in variable order"))
            })?;
            Ok(MaxPolyFn::projection(n, i))
        }
        Term::App(f, args) => {
            let base = f.strip_suffix('#').unwrap_or(f);
            let func = a
                .get(base)
                .ok_or_else(|| Error::MissingSymbol(base.to_string()))?;
            if func.arity() != args.len() {
                return Err(Error::ArityMismatch {
                    expected: func.arity(),
                    got: args.len(),
                });
            }
            if args.is_empty() {
                return Ok(func.lift_constant(n));
            }
            let inner: Vec<MaxPolyFn> = args
                .iter()
                .map(|s| extend_to_term(a, s, vars))
                .collect::<Result<_>>()?;
            Ok(func.compose(&inner)?.prune_dominated())
        }
    }
}

/// Value of a ground term.
pub fn eval_ground(a: &Assignment, t: &Term) -> Result<Scalar> {
    match t {
        Term::Var(x) => Err(Error::InvalidValue(format!(
            "term is not ground: variable `{x}`"
        ))),
        Term::App(f, args) => {
            let func = a
                .get(f)
                .ok_or_else(|| Error::MissingSymbol(f.to_string()))?;
            let vals: Vec<Scalar> = args
                .iter()
                .map(|s| eval_ground(a, s))
                .collect::<Result<_>>()?;
            func.eval(&vals)
        }
    }
}
