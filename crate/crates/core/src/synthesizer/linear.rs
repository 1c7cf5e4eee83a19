//! Exact search over single-branch affine assignments.
//!
//! Once the slopes of the defined symbols are fixed, every interpreted term is
//! affine in its variables with a constant part that is linear in the unknown
//! constants. A rule then holds everywhere iff its slopes compare the right
//! way and one linear inequality between constants holds, so each slope
//! vector reduces to a linear program.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Status, SynthesisConfig, SynthesisResult};
use crate::assignment::Assignment;
use crate::deppairs::dependency_pairs;
use crate::error::Result;
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::maxpoly::{MaxPolyFn, Poly};
use crate::scalar::Scalar;
use crate::trs::{Name, SymbolKind, Term, Trs};
use crate::verifier::Criterion;

/// Slopes tried for defined symbols, as (numerator, denominator).
pub const SLOPE_GRID: [(u64, u64); 7] = [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (4, 1)];

struct Affine {
    slopes: Vec<BigRational>,
    constant: Vec<BigRational>,
}

impl Affine {
    fn scaled_add(&mut self, other: &Affine, by: &BigRational) {
        for (a, b) in self.slopes.iter_mut().zip(&other.slopes) {
            *a += by * b;
        }
        for (a, b) in self.constant.iter_mut().zip(&other.constant) {
            *a += by * b;
        }
    }
}

struct Template<'a> {
    trs: &'a Trs,
    /// Index of each symbol's constant among the unknowns.
    unknown: Vec<usize>,
    /// Offset of each symbol's slopes inside a slope vector.
    slot: Vec<Option<usize>>,
    unknowns: usize,
}

impl<'a> Template<'a> {
    fn new(trs: &'a Trs) -> Self {
        let mut slot = Vec::new();
        let mut next_slot = 0;
        for s in trs.signature() {
            if s.kind == SymbolKind::Defined {
                slot.push(Some(next_slot));
                next_slot += s.arity;
            } else {
                slot.push(None);
            }
        }
        Template {
            trs,
            unknown: (0..trs.signature().len()).collect(),
            slot,
            unknowns: trs.signature().len(),
        }
    }

    fn slopes_len(&self) -> usize {
        self.trs.defined().map(|s| s.arity).sum()
    }

    fn index(&self, name: &str) -> usize {
        let base = name.strip_suffix('#').unwrap_or(name);
        self.trs
            .signature()
            .iter()
            .position(|s| &*s.name == base)
            .expect("known symbol")
    }

    fn affine(&self, t: &Term, vars: &[Name], slopes: &[BigRational]) -> Affine {
        let zero = || Affine {
            slopes: vec![BigRational::zero(); vars.len()],
            constant: vec![BigRational::zero(); self.unknowns],
        };
        match t {
            Term::Var(x) => {
                let mut a = zero();
                a.slopes[vars.iter().position(|v| v == x).expect("lhs variable")] =
                    BigRational::one();
                a
            }
            Term::App(f, args) => {
                let i = self.index(f);
                let mut a = zero();
                a.constant[self.unknown[i]] = BigRational::one();
                for (j, arg) in args.iter().enumerate() {
                    let inner = self.affine(arg, vars, slopes);
                    let by = match self.slot[i] {
                        Some(off) => slopes[off + j].clone(),
                        None => BigRational::one(),
                    };
                    a.scaled_add(&inner, &by);
                }
                a
            }
        }
    }
}

fn rational((n, d): (u64, u64)) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Index vectors of length `len` over `0..base` whose entries sum to `total`,
/// in lexicographic order.
fn compositions(len: usize, base: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(
        len: usize,
        base: usize,
        total: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == len {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest = len - prefix.len() - 1;
        for v in 0..base.min(total + 1) {
            if total - v > rest * (base - 1) {
                continue;
            }
            prefix.push(v);
            rec(len, base, total - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, base, total, &mut Vec::new(), &mut out);
    out
}

/// Searches single-branch affine assignments. Constructors are additive
/// (constants at least 1, nullary constants 0 or within the relaxation
/// bound); defined symbols take slopes from [`SLOPE_GRID`], restricted to
/// slopes of at least 1 for QI, and nonnegative rational constants. Slope
/// vectors are tried by increasing grid-index sum; for each, the linear
/// program minimizing the sum of constants decides feasibility.
///
/// `Exhausted` is relative to this template class. Only `kind`,
/// `relax_nullary`, `timeout` and `sampling` of `cfg` are used.
pub fn synthesize_linear_template(trs: &Trs, cfg: &SynthesisConfig) -> Result<SynthesisResult> {
    cfg.validate()?;
    let deadline = cfg.timeout.map(|t| Instant::now() + t);
    let tpl = Template::new(trs);
    let grid: Vec<BigRational> = SLOPE_GRID
        .iter()
        .map(|&s| rational(s))
        .filter(|s| cfg.kind != Criterion::Qi || *s >= BigRational::one())
        .collect();

    let mut pairs: Vec<(Term, Term)> = trs
        .rules()
        .iter()
        .map(|r| (r.lhs.clone(), r.rhs.clone()))
        .collect();
    if cfg.kind == Criterion::Dpi {
        pairs.extend(dependency_pairs(trs).into_iter().map(|p| (p.lhs, p.rhs)));
    }
    let vars: Vec<Vec<Name>> = pairs.iter().map(|(l, _)| l.vars()).collect();

    let len = tpl.slopes_len();
    let mut tried = 0u64;
    for total in 0..=len * (grid.len() - 1) {
        for idx in compositions(len, grid.len(), total) {
            tried += 1;
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Ok(SynthesisResult::without(Status::TimedOut, tried));
            }
            let slopes: Vec<BigRational> = idx.iter().map(|&i| grid[i].clone()).collect();
            if let Some(a) = solve_constants(&tpl, &pairs, &vars, &slopes, cfg) {
                return SynthesisResult::found(trs, a, cfg, tried);
            }
        }
    }
    Ok(SynthesisResult::without(Status::Exhausted, tried))
}

fn solve_constants(
    tpl: &Template<'_>,
    pairs: &[(Term, Term)],
    vars: &[Vec<Name>],
    slopes: &[BigRational],
    cfg: &SynthesisConfig,
) -> Option<Assignment> {
    let n = tpl.unknowns;
    let mut lp = LinearProgram::new(n);
    for ((l, r), vs) in pairs.iter().zip(vars) {
        let al = tpl.affine(l, vs, slopes);
        let ar = tpl.affine(r, vs, slopes);
        if al.slopes.iter().zip(&ar.slopes).any(|(a, b)| a < b) {
            return None;
        }
        let row: Vec<BigRational> = al
            .constant
            .iter()
            .zip(&ar.constant)
            .map(|(a, b)| a - b)
            .collect();
        lp.constrain(row, Cmp::Ge, BigRational::zero());
    }
    for (i, s) in tpl.trs.signature().iter().enumerate() {
        let u = tpl.unknown[i];
        match (s.kind, s.arity) {
            (SymbolKind::Constructor, 0) => match &cfg.relax_nullary {
                Some(b) => lp.bound(u, Cmp::Le, b.as_rational().clone()),
                None => lp.bound(u, Cmp::Eq, BigRational::zero()),
            },
            (SymbolKind::Constructor, _) => lp.bound(u, Cmp::Ge, BigRational::one()),
            (SymbolKind::Defined, _) => {}
        }
    }
    lp.minimize(vec![BigRational::one(); n]);
    let LpOutcome::Optimal(x) = lp.solve() else {
        return None;
    };
    let mut a = Assignment::new();
    for (i, s) in tpl.trs.signature().iter().enumerate() {
        let c = Scalar::from_rational(x[tpl.unknown[i]].clone()).expect("nonnegative");
        let f = match tpl.slot[i] {
            None if s.arity == 0 => MaxPolyFn::constant(0, c),
            None => MaxPolyFn::poly(Poly::sum_plus(s.arity, c)),
            Some(off) => {
                let mut p = Poly::constant(s.arity, c);
                for j in 0..s.arity {
                    let slope =
                        Scalar::from_rational(slopes[off + j].clone()).expect("nonnegative");
                    p = p.add(&Poly::var(s.arity, j).scale(&slope));
                }
                MaxPolyFn::poly(p)
            }
        };
        a.insert(&*s.name, f);
    }
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesizer::Domain;
    use crate::trs::parse_trs;

    const HALFLOG: &str = "half(0) -> 0\nhalf(s(0)) -> 0\nhalf(s(s(x))) -> s(half(x))\n\
                           log(s(s(x))) -> s(log(half(s(s(x)))))\nlog(s(0)) -> 0";

    fn cfg(kind: Criterion) -> SynthesisConfig {
        SynthesisConfig::new(kind, Domain::Rationals(1), 1, 1)
    }

    #[test]
    fn compositions_are_ordered() {
        assert_eq!(
            compositions(2, 3, 2),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(compositions(0, 3, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(1, 3, 5).is_empty());
    }

    #[test]
    fn qiex_identity() {
        let trs = parse_trs("f(s(s(x))) -> s(s(f(x)))\nf(0) -> f(0)\nf(s(0)) -> s(0)").unwrap();
        let r = synthesize_linear_template(&trs, &cfg(Criterion::Qi)).unwrap();
        assert_eq!(r.status, Status::Found);
        let a = r.assignment.unwrap();
        assert_eq!(a.get("f").unwrap().to_string(), "X1");
    }

    #[test]
    fn halflog_has_no_qi_but_a_dpi() {
        let trs = parse_trs(HALFLOG).unwrap();
        let mut c = cfg(Criterion::Qi);
        c.relax_nullary = Some(Scalar::one());
        assert_eq!(
            synthesize_linear_template(&trs, &c).unwrap().status,
            Status::Exhausted
        );
        c.kind = Criterion::Dpi;
        let r = synthesize_linear_template(&trs, &c).unwrap();
        assert_eq!(r.status, Status::Found);
        assert!(r.certificate.unwrap().is_valid());
    }

    #[test]
    fn constant_absorbs_constructor() {
        let trs = parse_trs("f(x) -> s(x)\ng(0) -> 0").unwrap();
        let r = synthesize_linear_template(&trs, &cfg(Criterion::Qi)).unwrap();
        assert_eq!(
            r.assignment.unwrap().get("f").unwrap().to_string(),
            "X1 + 1"
        );
    }
}
