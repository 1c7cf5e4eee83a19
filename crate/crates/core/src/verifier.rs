//! Checking candidate assignments as polynomial interpretations,
//! quasi-interpretations or DP-interpretations.
//!
//! Every constraint gets a verdict. `Holds` is proved by coefficient
//! domination, `Fails` always carries a point where exact evaluation violates
//! the constraint, and anything else is `Unknown`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::assignment::{
    additive_constant, extend_to_term, strictly_monotone_in, subterm_verdict, Assignment,
};
use crate::deppairs::dependency_pairs;
use crate::error::{Error, Result};
use crate::maxpoly::{
    check_geq_uniform, check_gt_uniform, find_violation, MaxPolyFn, SamplingPlan,
};
use crate::scalar::Scalar;
use crate::trs::{check_orthogonality, normalize, Name, NormalizeOutcome, Term, Trs};
use crate::verdict::{Verdict, Witness};

pub const SOUNDNESS_NOTE: &str =
    "sound but not complete: a constraint is valid only when proved by coefficient domination";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Pi,
    Qi,
    Dpi,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Pi => "pi",
            Criterion::Qi => "qi",
            Criterion::Dpi => "dpi",
        })
    }
}

/// How strict decrease is read for polynomial interpretations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PiMode {
    /// `[l] >= [r] + 1`, the natural-number reading of `>`.
    #[default]
    Nat,
    /// `[l] > [r]` for every rule and `[g] >= Xi + epsilon` for every symbol.
    Subterm,
    /// `[l] >= [r] + delta`.
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub relax_nullary: Option<Scalar>,
    pub sampling: SamplingPlan,
    pub pi_mode: PiMode,
    pub epsilon: Scalar,
    pub delta: Scalar,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            relax_nullary: None,
            sampling: SamplingPlan::default(),
            pi_mode: PiMode::Nat,
            epsilon: Scalar::one(),
            delta: Scalar::one(),
        }
    }
}

impl VerifyOptions {
    pub fn relaxed(bound: Scalar) -> Self {
        VerifyOptions {
            relax_nullary: Some(bound),
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Additivity,
    Monotonicity,
    StrictMonotonicity,
    Subterm,
    Rule,
    DependencyPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub description: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Valid,
    Invalid,
    Inconclusive,
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overall::Valid => "valid",
            Overall::Invalid => "invalid",
            Overall::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub criterion: Criterion,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_mode: Option<PiMode>,
    pub note: &'static str,
    pub overall: Overall,
    /// Set when the system is not orthogonal: the verdicts still stand, but
    /// the rules may compute relations rather than functions.
    pub non_orthogonal: bool,
    pub constraints: Vec<Constraint>,
}

impl Report {
    fn new(
        criterion: Criterion,
        pi_mode: Option<PiMode>,
        non_orthogonal: bool,
        constraints: Vec<Constraint>,
    ) -> Report {
        let overall = if constraints.iter().all(|c| c.verdict.holds()) {
            Overall::Valid
        } else if constraints.iter().any(|c| c.verdict.is_failure()) {
            Overall::Invalid
        } else {
            Overall::Inconclusive
        };
        Report {
            criterion,
            pi_mode,
            note: SOUNDNESS_NOTE,
            overall,
            non_orthogonal,
            constraints,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.overall == Overall::Valid
    }

    pub fn failures(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.verdict.is_failure())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} ({SOUNDNESS_NOTE})", self.criterion)?;
        if self.non_orthogonal {
            writeln!(f, "# warning: system is not orthogonal")?;
        }
        for c in &self.constraints {
            writeln!(f, "[{}] {}", c.verdict, c.description)?;
        }
        write!(f, "overall: {}", self.overall)
    }
}

#[derive(Clone, Copy)]
enum Relation<'a> {
    Geq(&'a Scalar),
    Gt,
}

/// Proves or refutes `lhs REL rhs` over the nonnegative orthant. `names`
/// label the coordinates of a witness.
fn compare(
    lhs: &MaxPolyFn,
    rhs: &MaxPolyFn,
    rel: Relation<'_>,
    names: &[Name],
    plan: &SamplingPlan,
) -> Verdict {
    let (proved, target) = match rel {
        Relation::Geq(m) => {
            let target = if m.is_zero() {
                rhs.clone()
            } else {
                rhs.add_const(m)
            };
            (check_geq_uniform(lhs, &target), target)
        }
        Relation::Gt => (check_gt_uniform(lhs, rhs), rhs.clone()),
    };
    if proved.expect("both sides share the variable order").holds() {
        return Verdict::Holds;
    }
    let strict = matches!(rel, Relation::Gt);
    // For `>` an equality is already a violation, so shift the estimate down
    // far enough that equal points get an exact check.
    let shift = if strict { 2e-9 } else { 0.0 };
    let hit = find_violation(
        plan,
        lhs.arity(),
        |x| lhs.eval_f64(x) - target.eval_f64(x) - shift,
        |x| {
            let (l, r) = (lhs.eval_unchecked(x), target.eval_unchecked(x));
            if strict {
                l <= r
            } else {
                l < r
            }
        },
    );
    match hit {
        Some(x) => Verdict::Fails {
            witness: Witness {
                lhs: lhs.eval_unchecked(&x),
                rhs: target.eval_unchecked(&x),
                point: names.iter().map(|n| n.to_string()).zip(x).collect(),
            },
        },
        None => Verdict::Unknown,
    }
}

fn additivity_constraints(trs: &Trs, a: &Assignment, opts: &VerifyOptions) -> Vec<Constraint> {
    trs.constructors()
        .map(|c| {
            let f = a.get(&c.name).expect("assignment checked total");
            let verdict = match additive_constant(f, opts.relax_nullary.as_ref()) {
                Ok(_) => Verdict::Holds,
                Err(reason) => Verdict::Rejected { reason },
            };
            Constraint {
                kind: ConstraintKind::Additivity,
                description: format!("{} = {} is additive", c.name, f),
                verdict,
            }
        })
        .collect()
}

fn monotonicity_constraints(trs: &Trs, a: &Assignment) -> Vec<Constraint> {
    trs.signature()
        .iter()
        .map(|s| Constraint {
            kind: ConstraintKind::Monotonicity,
            description: format!(
                "{} = {} is monotone",
                s.name,
                a.get(&s.name).expect("total")
            ),
            verdict: Verdict::Holds,
        })
        .collect()
}

fn subterm_constraints(
    trs: &Trs,
    a: &Assignment,
    margin: &Scalar,
    plan: &SamplingPlan,
) -> Vec<Constraint> {
    let mut out = Vec::new();
    for s in trs.signature() {
        let f = a.get(&s.name).expect("total");
        for j in 0..s.arity {
            let rhs = if margin.is_zero() {
                format!("X{}", j + 1)
            } else {
                format!("X{} + {}", j + 1, margin)
            };
            out.push(Constraint {
                kind: ConstraintKind::Subterm,
                description: format!("{} = {} >= {}", s.name, f, rhs),
                verdict: subterm_verdict(f, j, margin, plan),
            });
        }
    }
    out
}

fn strict_monotonicity_constraints(trs: &Trs, a: &Assignment) -> Vec<Constraint> {
    let mut out = Vec::new();
    for s in trs.signature() {
        let f = a.get(&s.name).expect("total");
        for i in 0..s.arity {
            let verdict = if strictly_monotone_in(f, i).holds() {
                Verdict::Holds
            } else {
                Verdict::Unknown
            };
            out.push(Constraint {
                kind: ConstraintKind::StrictMonotonicity,
                description: format!(
                    "{} = {} strictly increasing in X{} (every branch has a pure power)",
                    s.name,
                    f,
                    i + 1
                ),
                verdict,
            });
        }
    }
    out
}

fn relation_text(rel: Relation<'_>) -> String {
    match rel {
        Relation::Geq(m) if m.is_zero() => ">=".into(),
        Relation::Geq(m) => format!(">= {m} +"),
        Relation::Gt => ">".into(),
    }
}

fn pair_constraint(
    a: &Assignment,
    kind: ConstraintKind,
    label: String,
    lhs: &Term,
    rhs: &Term,
    rel: Relation<'_>,
    plan: &SamplingPlan,
) -> Result<Constraint> {
    let vars = lhs.vars();
    let ql = extend_to_term(a, lhs, &vars)?;
    let qr = extend_to_term(a, rhs, &vars)?;
    let names: Vec<String> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| format!("X{}={v}", i + 1))
        .collect();
    let legend = if names.is_empty() {
        String::new()
    } else {
        format!(" with {}", names.join(", "))
    };
    Ok(Constraint {
        kind,
        description: format!("{label}: {ql} {} {qr}{legend}", relation_text(rel)),
        verdict: compare(&ql, &qr, rel, &vars, plan),
    })
}

/// Runs every check for `criterion`. Fails only on malformed input, such as
/// an assignment that misses a symbol.
pub fn verify(
    trs: &Trs,
    a: &Assignment,
    criterion: Criterion,
    opts: &VerifyOptions,
) -> Result<Report> {
    a.require_total(trs)?;
    for s in trs.signature() {
        let f = a.get(&s.name).expect("total");
        if f.arity() != s.arity {
            return Err(Error::ArityMismatch {
                expected: s.arity,
                got: f.arity(),
            });
        }
    }
    let plan = &opts.sampling;
    let mut cs = additivity_constraints(trs, a, opts);
    cs.extend(monotonicity_constraints(trs, a));
    let zero = Scalar::zero();
    let one = Scalar::one();
    let rule_rel = match criterion {
        Criterion::Qi | Criterion::Dpi => Relation::Geq(&zero),
        Criterion::Pi => match opts.pi_mode {
            PiMode::Nat => Relation::Geq(&one),
            PiMode::Delta => Relation::Geq(&opts.delta),
            PiMode::Subterm => Relation::Gt,
        },
    };
    match criterion {
        Criterion::Qi => cs.extend(subterm_constraints(trs, a, &zero, plan)),
        Criterion::Dpi => {}
        Criterion::Pi => {
            cs.extend(strict_monotonicity_constraints(trs, a));
            if opts.pi_mode == PiMode::Subterm {
                cs.extend(subterm_constraints(trs, a, &opts.epsilon, plan));
            }
        }
    }
    for (i, rule) in trs.rules().iter().enumerate() {
        let label = format!("rule {} {}", i + 1, rule);
        cs.push(pair_constraint(
            a,
            ConstraintKind::Rule,
            label,
            &rule.lhs,
            &rule.rhs,
            rule_rel,
            plan,
        )?);
    }
    if criterion == Criterion::Dpi {
        for dp in dependency_pairs(trs) {
            let label = format!("pair {dp}");
            cs.push(pair_constraint(
                a,
                ConstraintKind::DependencyPair,
                label,
                &dp.lhs,
                &dp.rhs,
                rule_rel,
                plan,
            )?);
        }
    }
    let non_orthogonal = !check_orthogonality(trs).is_orthogonal();
    let mode = (criterion == Criterion::Pi).then_some(opts.pi_mode);
    Ok(Report::new(criterion, mode, non_orthogonal, cs))
}

pub fn verify_qi(trs: &Trs, a: &Assignment, opts: &VerifyOptions) -> Result<Report> {
    verify(trs, a, Criterion::Qi, opts)
}

pub fn verify_dpi(trs: &Trs, a: &Assignment, opts: &VerifyOptions) -> Result<Report> {
    verify(trs, a, Criterion::Dpi, opts)
}

pub fn verify_pi(trs: &Trs, a: &Assignment, mode: PiMode, opts: &VerifyOptions) -> Result<Report> {
    let opts = VerifyOptions {
        pi_mode: mode,
        ..opts.clone()
    };
    verify(trs, a, Criterion::Pi, &opts)
}

/// Anything that gives each symbol a function on nonnegative rationals.
pub trait SymbolInterpretation {
    fn eval_symbol(&self, symbol: &str, args: &[Scalar]) -> Result<Scalar>;
}

impl SymbolInterpretation for Assignment {
    fn eval_symbol(&self, symbol: &str, args: &[Scalar]) -> Result<Scalar> {
        let base = symbol.strip_suffix('#').unwrap_or(symbol);
        self.get(base)
            .ok_or_else(|| Error::MissingSymbol(base.to_string()))?
            .eval(args)
    }
}

/// Value of a ground term under `interp`.
pub fn eval_ground_with<I: SymbolInterpretation + ?Sized>(interp: &I, t: &Term) -> Result<Scalar> {
    match t {
        Term::Var(x) => Err(Error::InvalidValue(format!(
            "term is not ground: variable `{x}`"
        ))),
        Term::App(f, args) => {
            let vals: Vec<Scalar> = args
                .iter()
                .map(|s| eval_ground_with(interp, s))
                .collect::<Result<_>>()?;
            interp.eval_symbol(f, &vals)
        }
    }
}

/// The additive bound `k`: the largest constructor constant, at least 1.
pub fn additive_bound<I: SymbolInterpretation + ?Sized>(trs: &Trs, interp: &I) -> Result<Scalar> {
    let mut k = Scalar::one();
    for c in trs.constructors() {
        k = k.max(interp.eval_symbol(&c.name, &vec![Scalar::zero(); c.arity])?);
    }
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `theta(f(v)) < theta(value)`.
    Bound,
    /// `theta(f)(k|v1|, ..., k|vm|) < |value|`.
    SizeLemma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalViolation {
    pub kind: ViolationKind,
    pub term: Term,
    pub value: Term,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalReport {
    pub checked: usize,
    /// Samples that did not reach a value within the budget.
    pub skipped: usize,
    pub violations: Vec<EmpiricalViolation>,
}

impl EmpiricalReport {
    pub fn bound_holds(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Bound)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Normalizes each basic term `f(v1, ..., vm)` and compares its value against
/// the interpretation, both directly and through the size bound.
pub fn empirical_si_check<I: SymbolInterpretation + ?Sized>(
    trs: &Trs,
    interp: &I,
    samples: &[Term],
    budget: usize,
) -> Result<EmpiricalReport> {
    let mut report = EmpiricalReport::default();
    if samples.is_empty() {
        return Ok(report);
    }
    let k = additive_bound(trs, interp)?;
    for t in samples {
        let Term::App(f, args) = t else {
            return Err(Error::InvalidValue(format!(
                "sample `{t}` is not a basic term"
            )));
        };
        let NormalizeOutcome::NormalForm { term: value, .. } = normalize(trs, t, budget) else {
            report.skipped += 1;
            continue;
        };
        report.checked += 1;
        let lhs = eval_ground_with(interp, t)?;
        let rhs = eval_ground_with(interp, &value)?;
        if lhs < rhs {
            report.violations.push(EmpiricalViolation {
                kind: ViolationKind::Bound,
                term: t.clone(),
                value: value.clone(),
                lhs,
                rhs,
            });
        }
        let scaled: Vec<Scalar> = args
            .iter()
            .map(|v| &k * &Scalar::from_int(v.size() as u64))
            .collect();
        let lhs = interp.eval_symbol(f, &scaled)?;
        let rhs = Scalar::from_int(value.size() as u64);
        if lhs < rhs {
            report.violations.push(EmpiricalViolation {
                kind: ViolationKind::SizeLemma,
                term: t.clone(),
                value,
                lhs,
                rhs,
            });
        }
    }
    Ok(report)
}

/// First step `i` of `trace` where the interpretation does not strictly
/// decrease, at any of `valuations` (variables not in a valuation read 0).
pub fn first_non_decreasing_step(
    a: &Assignment,
    trace: &[Term],
    valuations: &[HashMap<Name, Scalar>],
) -> Result<Option<usize>> {
    let value = |t: &Term, env: &HashMap<Name, Scalar>| -> Result<Scalar> {
        let vars = t.vars();
        let f = extend_to_term(a, t, &vars)?;
        let x: Vec<Scalar> = vars
            .iter()
            .map(|v| env.get(v).cloned().unwrap_or_default())
            .collect();
        f.eval(&x)
    };
    for (i, w) in trace.windows(2).enumerate() {
        for env in valuations {
            if value(&w[0], env)? <= value(&w[1], env)? {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::{parse_term, parse_trs};

    const QIEX: &str = "f(s(s(x))) -> s(s(f(x)))\nf(0) -> f(0)\nf(s(0)) -> s(0)";
    const HALFLOG: &str = "half(0) -> 0\nhalf(s(0)) -> 0\nhalf(s(s(x))) -> s(half(x))\n\
                           log(s(s(x))) -> s(log(half(s(s(x)))))\nlog(s(0)) -> 0";
    const DOUBLING: &str = "d(0) -> 0\nd(s(x)) -> s(s(d(x)))";

    fn setup(trs: &str, si: &str) -> (Trs, Assignment) {
        let trs = parse_trs(trs).unwrap();
        let a = Assignment::parse(si, &trs).unwrap();
        (trs, a)
    }

    fn quick() -> VerifyOptions {
        VerifyOptions {
            sampling: SamplingPlan::quick(),
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn qiex_is_a_qi() {
        let (trs, a) = setup(QIEX, "0 = 0\ns = X1 + 1\nf = X1");
        let r = verify_qi(&trs, &a, &quick()).unwrap();
        assert_eq!(r.overall, Overall::Valid, "{r}");
        assert!(!r.non_orthogonal);
    }

    #[test]
    fn forced_rule_failure() {
        let (trs, a) = setup(
            "f(x) -> s(x)\ng(0) -> 0",
            "0 = 0\ns = X1 + 1\nf = X1\ng = X1",
        );
        let r = verify_qi(&trs, &a, &quick()).unwrap();
        assert_eq!(r.overall, Overall::Invalid);
        let failed: Vec<_> = r.failures().collect();
        assert_eq!(failed.len(), 1);
        let Verdict::Fails { witness } = &failed[0].verdict else {
            panic!()
        };
        assert_eq!(witness.point[0].0, "x");
        assert!(witness.lhs < witness.rhs);
    }

    #[test]
    fn doubling_pi_modes() {
        let (trs, a) = setup(DOUBLING, "0 = 0\ns = X1 + 1\nd = 3*X1 + 1");
        for mode in [PiMode::Nat, PiMode::Delta] {
            assert!(verify_pi(&trs, &a, mode, &quick()).unwrap().is_valid());
        }
        let (trs, a) = setup(DOUBLING, "0 = 0\ns = X1 + 1\nd = 2*X1");
        let r = verify_pi(&trs, &a, PiMode::Nat, &quick()).unwrap();
        assert_eq!(r.overall, Overall::Invalid);
        assert!(r.failures().all(|c| c.kind == ConstraintKind::Rule));
    }

    #[test]
    fn strict_mode_catches_equalities() {
        // 2X + 2 > 2X + 2 is false everywhere
        let (trs, a) = setup(DOUBLING, "0 = 0\ns = X1 + 1\nd = 2*X1 + 1");
        let r = verify_pi(&trs, &a, PiMode::Subterm, &quick()).unwrap();
        assert_eq!(r.overall, Overall::Invalid);
    }

    #[test]
    fn max_is_not_strictly_monotone() {
        let (trs, a) = setup(
            "f(x, y) -> x\ng(0) -> 0",
            "0 = 0\nf = max(X1 + 1, X2 + 1)\ng = X1 + 1",
        );
        let r = verify_pi(&trs, &a, PiMode::Nat, &quick()).unwrap();
        assert!(
            r.constraints
                .iter()
                .any(|c| c.kind == ConstraintKind::StrictMonotonicity
                    && c.verdict == Verdict::Unknown)
        );
        assert_ne!(r.overall, Overall::Valid);
    }

    #[test]
    fn halflog_dpi_but_not_qi() {
        let (trs, a) = setup(
            HALFLOG,
            "0 = 1\ns = X1 + 1\nhalf = 1/2*X1 + 1/2\nlog = 2*X1",
        );
        let opts = VerifyOptions {
            relax_nullary: Some(Scalar::one()),
            ..quick()
        };
        assert_eq!(verify_dpi(&trs, &a, &opts).unwrap().overall, Overall::Valid);
        let qi = verify_qi(&trs, &a, &opts).unwrap();
        assert_eq!(qi.overall, Overall::Invalid);
        assert!(qi.failures().any(|c| c.kind == ConstraintKind::Subterm));
        // strict reading of additivity rejects `0 = 1`
        assert_eq!(
            verify_dpi(&trs, &a, &quick()).unwrap().overall,
            Overall::Invalid
        );
    }

    #[test]
    fn halflog_with_half_log_fails_with_witness() {
        let (trs, a) = setup(
            HALFLOG,
            "0 = 1\ns = X1 + 1\nhalf = 1/2*X1 + 1/2\nlog = 1/2*X1",
        );
        let opts = VerifyOptions::relaxed(Scalar::one());
        let r = verify_dpi(&trs, &a, &opts).unwrap();
        assert_eq!(r.overall, Overall::Invalid);
        for c in r.failures() {
            let Verdict::Fails { witness } = &c.verdict else {
                panic!()
            };
            assert!(witness.lhs < witness.rhs);
        }
    }

    #[test]
    fn missing_symbol_is_an_error() {
        let (trs, a) = setup(QIEX, "0 = 0\ns = X1 + 1");
        assert_eq!(
            verify_qi(&trs, &a, &quick()),
            Err(Error::MissingSymbol("f".into()))
        );
    }

    #[test]
    fn empirical_check_on_qiex() {
        let (trs, a) = setup(QIEX, "0 = 0\ns = X1 + 1\nf = X1");
        let samples: Vec<Term> = (1..=15)
            .step_by(2)
            .map(|n| parse_term(&format!("f({}0{})", "s(".repeat(n), ")".repeat(n)), &trs).unwrap())
            .collect();
        let r = empirical_si_check(&trs, &a, &samples, 1000).unwrap();
        assert_eq!(r.checked, 8);
        assert!(r.passed(), "{r:?}");
        assert!(empirical_si_check(&trs, &a, &[], 10).unwrap().passed());

        let (_, broken) = setup(QIEX, "0 = 0\ns = X1 + 1\nf = 0");
        let t = parse_term("f(s(0))", &trs).unwrap();
        let r = empirical_si_check(&trs, &broken, std::slice::from_ref(&t), 10).unwrap();
        assert_eq!(r.violations[0].term, t);
        assert_eq!(r.violations[0].kind, ViolationKind::Bound);
    }

    #[test]
    fn looping_samples_are_skipped() {
        let (trs, a) = setup(QIEX, "0 = 0\ns = X1 + 1\nf = X1");
        let t = parse_term("f(0)", &trs).unwrap();
        let r = empirical_si_check(&trs, &a, &[t], 50).unwrap();
        assert_eq!((r.checked, r.skipped), (0, 1));
    }

    #[test]
    fn reports_are_deterministic() {
        let (trs, a) = setup(HALFLOG, "0 = 1\ns = X1 + 1\nhalf = 1/2*X1 + 1/2\nlog = X1");
        let opts = VerifyOptions::relaxed(Scalar::one());
        let r1 = verify_qi(&trs, &a, &opts).unwrap().to_string();
        let r2 = verify_qi(&trs, &a, &opts).unwrap().to_string();
        assert_eq!(r1, r2);
    }
}
