//! Generators and oracles shared by the integration suites.
#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use supbound_core::maxpoly::{FnExpr, MaxPolyFn, Poly};
use supbound_core::synthesizer::SynthesisConfig;
use supbound_core::trs::{Rule, SymbolKind, Term, Trs};
use supbound_core::{verify, Assignment, Scalar};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load(name: &str) -> Trs {
    supbound_core::trs::parse_trs(&read_fixture(name)).unwrap()
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (0u64..6, 1u64..4).prop_map(|(n, d)| Scalar::ratio(n, d))
}

pub fn point(arity: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), arity)
}

/// Expressions over `+`, `*`, `max` and constants in `arity` variables.
pub fn fn_expr(arity: usize) -> impl Strategy<Value = FnExpr> {
    let leaf = prop_oneof![
        (0..arity).prop_map(FnExpr::Var),
        scalar().prop_map(FnExpr::Const)
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FnExpr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FnExpr::mul(a, b)),
            prop::collection::vec(inner, 1..3).prop_map(FnExpr::Max),
        ]
    })
}

/// Affine max-plus functions with up to three branches.
pub fn maxplus(arity: usize) -> impl Strategy<Value = MaxPolyFn> {
    let branch = (scalar(), prop::collection::vec(scalar(), arity)).prop_map(move |(c, xs)| {
        let mut p = Poly::constant(arity, c);
        for (i, x) in xs.into_iter().enumerate() {
            p = p.add(&Poly::var(arity, i).scale(&x));
        }
        p
    });
    prop::collection::vec(branch, 1..4).prop_map(move |bs| MaxPolyFn::new(arity, bs))
}

const DEFINED: [(&str, usize); 3] = [("f", 1), ("g", 2), ("h", 1)];
const CONSTRUCTORS: [(&str, usize); 2] = [("0", 0), ("s", 1)];

fn pattern<R: Rng>(rng: &mut R, depth: usize, vars: &mut Vec<String>) -> Term {
    let r = rng.gen_range(0..10);
    if depth == 0 || r < 4 {
        let v = format!("x{}", vars.len() + 1);
        vars.push(v.clone());
        Term::var(&v)
    } else if r < 6 {
        Term::constant("0")
    } else {
        Term::app("s", vec![pattern(rng, depth - 1, vars)])
    }
}

fn rhs<R: Rng>(rng: &mut R, depth: usize, vars: &[String], defined: &[(&str, usize)]) -> Term {
    let r = rng.gen_range(0..10);
    if depth == 0 || r < 3 {
        return match vars.choose(rng) {
            Some(v) if rng.gen_bool(0.8) => Term::var(v),
            _ => Term::constant("0"),
        };
    }
    if r < 6 {
        return Term::app("s", vec![rhs(rng, depth - 1, vars, defined)]);
    }
    let &(f, arity) = defined.choose(rng).expect("nonempty");
    Term::app(
        f,
        (0..arity)
            .map(|_| rhs(rng, depth - 1, vars, defined))
            .collect(),
    )
}

/// A constructor system over `0` and `s` with one to three defined symbols
/// and one to four rules. `None` when the draw is not well formed.
pub fn random_trs<R: Rng>(rng: &mut R) -> Option<Trs> {
    let n_def = rng.gen_range(1..=3);
    let defined = &DEFINED[..n_def];
    let n_rules = rng.gen_range(1..=4);
    let mut rules = Vec::new();
    for i in 0..n_rules {
        // every defined symbol heads at least one rule when possible
        let &(f, arity) = defined
            .get(i)
            .unwrap_or_else(|| defined.choose(rng).expect("nonempty"));
        let mut vars = Vec::new();
        let lhs = Term::app(f, (0..arity).map(|_| pattern(rng, 2, &mut vars)).collect());
        let r = rhs(rng, 3, &vars, defined);
        rules.push(Rule::new(lhs, r));
    }
    let extra: Vec<_> = CONSTRUCTORS
        .iter()
        .map(|(n, a)| ((*n).into(), *a))
        .collect();
    Trs::with_symbols(rules, &extra).ok()
}

/// Every affine function of `arity` variables with coefficients in `grid`.
fn affine_all(arity: usize, grid: &[Scalar]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(arity)];
    for slot in 0..=arity {
        out = out
            .iter()
            .flat_map(|p| {
                grid.iter().map(move |v| {
                    let q = if slot == 0 {
                        Poly::constant(arity, v.clone())
                    } else {
                        Poly::var(arity, slot - 1).scale(v)
                    };
                    p.add(&q)
                })
            })
            .collect();
    }
    out
}

/// Unpruned candidates: ordered tuples of up to `k` branches, repeats allowed.
pub fn oracle_candidates(trs: &Trs, cfg: &SynthesisConfig) -> Vec<Vec<MaxPolyFn>> {
    let grid = cfg.value_grid();
    trs.signature()
        .iter()
        .map(|s| match (s.kind, s.arity) {
            (SymbolKind::Constructor, 0) => grid
                .iter()
                .filter(|v| cfg.relax_nullary.as_ref().map_or(v.is_zero(), |b| *v <= b))
                .map(|v| MaxPolyFn::constant(0, v.clone()))
                .collect(),
            (SymbolKind::Constructor, n) => grid
                .iter()
                .filter(|v| **v >= Scalar::one())
                .map(|v| {
                    let mut p = Poly::constant(n, v.clone());
                    for i in 0..n {
                        p = p.add(&Poly::var(n, i));
                    }
                    MaxPolyFn::new(n, vec![p])
                })
                .collect(),
            (SymbolKind::Defined, n) => {
                let polys = affine_all(n, &grid);
                let mut out: Vec<Vec<Poly>> = vec![vec![]];
                let mut all = Vec::new();
                for _ in 0..cfg.max_branches {
                    out = out
                        .iter()
                        .flat_map(|bs| {
                            polys.iter().map(move |p| {
                                let mut v = bs.clone();
                                v.push(p.clone());
                                v
                            })
                        })
                        .collect();
                    all.extend(out.iter().map(|bs| MaxPolyFn::new(n, bs.clone())));
                }
                all
            }
        })
        .collect()
}

pub fn oracle_space(trs: &Trs, cfg: &SynthesisConfig) -> usize {
    oracle_candidates(trs, cfg).iter().map(Vec::len).product()
}

/// Whether any candidate of the unpruned space verifies.
pub fn oracle_finds(trs: &Trs, cfg: &SynthesisConfig) -> bool {
    let lists = oracle_candidates(trs, cfg);
    let names: Vec<String> = trs.signature().iter().map(|s| s.name.to_string()).collect();
    let opts = cfg.verify_options();
    let mut idx = vec![0usize; lists.len()];
    if lists.iter().any(Vec::is_empty) {
        return false;
    }
    loop {
        let mut a = Assignment::new();
        for (i, l) in lists.iter().enumerate() {
            a.insert(names[i].clone(), l[idx[i]].clone());
        }
        if verify(trs, &a, cfg.kind, &opts).unwrap().is_valid() {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub mod props {
    use proptest::prelude::*;
    use proptest::test_runner::TestCaseError;
    use supbound_core::maxpoly::{
        check_geq_uniform, cnf_holds_at, decompose_geq, eval_expr, normalize_fn, FnExpr, MaxPolyFn,
    };
    use supbound_core::Scalar;

    use super::{fn_expr, maxplus, point};

    pub type Case = Result<(), TestCaseError>;

    pub fn normalize_strategy() -> impl Strategy<Value = (FnExpr, Vec<Scalar>)> {
        (fn_expr(2), point(2))
    }

    /// The normal form agrees with direct evaluation.
    pub fn normalize_pointwise((e, x): (FnExpr, Vec<Scalar>)) -> Case {
        prop_assert_eq!(normalize_fn(&e, 2).eval(&x).unwrap(), eval_expr(&e, &x));
        Ok(())
    }

    pub fn compose_strategy() -> impl Strategy<Value = (FnExpr, MaxPolyFn, MaxPolyFn, Vec<Scalar>)>
    {
        (fn_expr(2), maxplus(2), maxplus(2), point(2))
    }

    /// Composing then evaluating equals evaluating the arguments first.
    pub fn compose_substitution(
        (e, g1, g2, x): (FnExpr, MaxPolyFn, MaxPolyFn, Vec<Scalar>),
    ) -> Case {
        let f = normalize_fn(&e, 2);
        let composed = f.compose(&[g1.clone(), g2.clone()]).unwrap();
        let inner = [g1.eval(&x).unwrap(), g2.eval(&x).unwrap()];
        prop_assert_eq!(composed.eval(&x).unwrap(), f.eval(&inner).unwrap());
        Ok(())
    }

    pub fn decompose_strategy() -> impl Strategy<Value = (MaxPolyFn, MaxPolyFn, Vec<Scalar>)> {
        (maxplus(2), maxplus(2), point(2))
    }

    /// The clause form of `q >= q'` holds exactly where the inequality does,
    /// and a uniform proof is never contradicted.
    pub fn decompose_pointwise((q, q2, x): (MaxPolyFn, MaxPolyFn, Vec<Scalar>)) -> Case {
        let direct = q.eval(&x).unwrap() >= q2.eval(&x).unwrap();
        prop_assert_eq!(cnf_holds_at(&decompose_geq(&q, &q2).unwrap(), &x), direct);
        if check_geq_uniform(&q, &q2).unwrap().holds() {
            prop_assert!(direct);
        }
        Ok(())
    }

    pub fn monotone_strategy() -> impl Strategy<Value = (FnExpr, Vec<Scalar>, Vec<Scalar>)> {
        (fn_expr(2), point(2), point(2))
    }

    /// Functions built from nonnegative constants are monotone.
    pub fn monotone((e, x, dx): (FnExpr, Vec<Scalar>, Vec<Scalar>)) -> Case {
        let f = normalize_fn(&e, 2);
        let y: Vec<Scalar> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        prop_assert!(f.eval(&x).unwrap() <= f.eval(&y).unwrap());
        Ok(())
    }
}
