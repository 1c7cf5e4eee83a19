//! Floating-point functions with real coefficients.
//!
//! Nothing here certifies anything: comparisons use an absolute tolerance of
//! [`TOLERANCE`]. It exists to evaluate interpretations whose coefficients are
//! irrational and therefore outside the exact algebra.

use std::collections::{BTreeMap, HashMap};

use crate::trs::{Name, Term};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxPoly {
    pub arity: usize,
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl ApproxPoly {
    pub fn new(arity: usize, terms: Vec<(Vec<u32>, f64)>) -> Self {
        assert!(terms.iter().all(|(e, c)| e.len() == arity && *c >= 0.0));
        ApproxPoly { arity, terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxFn {
    pub arity: usize,
    pub branches: Vec<ApproxPoly>,
}

impl ApproxFn {
    pub fn new(arity: usize, branches: Vec<ApproxPoly>) -> Self {
        assert!(!branches.is_empty());
        ApproxFn { arity, branches }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.branches
            .iter()
            .map(|b| b.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub type ApproxAssignment = BTreeMap<String, ApproxFn>;

/// Value of `t` with variables read from `env`; `None` if a symbol or
/// variable is missing.
pub fn eval_term(a: &ApproxAssignment, t: &Term, env: &HashMap<Name, f64>) -> Option<f64> {
    match t {
        Term::Var(x) => env.get(x).copied(),
        Term::App(f, args) => {
            let func = a.get(&**f)?;
            let vals: Option<Vec<f64>> = args.iter().map(|s| eval_term(a, s, env)).collect();
            Some(func.eval(&vals?))
        }
    }
}

/// `lhs + TOLERANCE >= rhs`.
pub fn approx_geq(lhs: f64, rhs: f64) -> bool {
    lhs + TOLERANCE >= rhs
}
