//! Runtime complexity of constructor systems, and sup-interpretations built
//! from a runtime bound.
//!
//! With `rc(n)` bounding the derivation length of basic terms of size `n`
//! and `|P|` the size of the system, defined symbols get
//! `(X1 + ... + Xn + 1) * |P|^rc(X1 + ... + Xn + 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trs::{
    basic_terms, derivational_length, normalize_traced, random_basic_term, SymbolKind, Term, Trs,
};
use crate::verifier::SymbolInterpretation;

/// Sizes above this are sampled rather than enumerated.
pub const EXHAUSTIVE_MAX_SIZE: usize = 12;
/// Random basic terms drawn per sampled size.
pub const SAMPLES_PER_SIZE: usize = 200;

fn display<T: fmt::Display, S: Serializer>(t: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(t)
}

fn display_opt<T: fmt::Display, S: Serializer>(
    t: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match t {
        Some(t) => s.collect_str(t),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcEntry {
    pub size: usize,
    /// Basic terms of exactly this size that were examined.
    pub terms: usize,
    /// Largest derivation length among terms of size at most `size` that
    /// terminated within budget.
    pub lower_bound: u64,
    #[serde(serialize_with = "display_opt")]
    pub witness: Option<Term>,
    /// Terms of size at most `size` whose search ran out of budget or found
    /// a cycle.
    pub flagged: usize,
}

impl RcEntry {
    /// `rc(size)`, defined only when nothing up to this size was flagged.
    pub fn rc(&self) -> Option<u64> {
        (self.flagged == 0).then_some(self.lower_bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcReport {
    pub entries: Vec<RcEntry>,
    /// True when some size was sampled rather than enumerated.
    pub approximate: bool,
}

impl RcReport {
    pub fn rc(&self, n: usize) -> Option<u64> {
        self.entries.get(n.checked_sub(1)?).and_then(RcEntry::rc)
    }

    /// The measured values as a table, if every size is defined.
    pub fn to_function(&self) -> Result<RcFunction> {
        let mut points = Vec::new();
        for e in &self.entries {
            points.push((
                e.size as u64,
                e.rc().ok_or(Error::RcUndefined(e.size as u64))?,
            ));
        }
        Ok(RcFunction::Table(points))
    }
}

/// Measures `rc(n)` for `n` in `1..=max_size`. Sizes up to
/// [`EXHAUSTIVE_MAX_SIZE`] are exhaustive; larger sizes use
/// [`SAMPLES_PER_SIZE`] random terms drawn from `seed` and mark the report
/// approximate. `budget` bounds each derivational-length search.
pub fn measure_rc(trs: &Trs, max_size: usize, budget: usize, seed: u64) -> RcReport {
    let exhaustive = max_size.min(EXHAUSTIVE_MAX_SIZE);
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for t in basic_terms(trs, exhaustive) {
        by_size[t.size()].push(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (n, terms) in by_size.iter_mut().enumerate().skip(exhaustive + 1) {
        for _ in 0..SAMPLES_PER_SIZE {
            match random_basic_term(trs, n, &mut rng) {
                Some(t) => terms.push(t),
                None => break,
            }
        }
    }

    let mut entries = Vec::with_capacity(max_size);
    let (mut best, mut witness, mut flagged) = (0u64, None::<Term>, 0usize);
    for (n, terms) in by_size.iter().enumerate().skip(1) {
        for t in terms {
            match derivational_length(trs, t, budget) {
                Ok(dl) if dl > best || witness.is_none() => {
                    best = dl;
                    witness = Some(t.clone());
                }
                Ok(_) => {}
                Err(_) => flagged += 1,
            }
        }
        entries.push(RcEntry {
            size: n,
            terms: terms.len(),
            lower_bound: best,
            witness: witness.clone(),
            flagged,
        });
    }
    RcReport {
        entries,
        approximate: max_size > EXHAUSTIVE_MAX_SIZE,
    }
}

/// A nondecreasing bound on derivation length as a function of term size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RcFunction {
    /// `c * n`
    Linear(u64),
    /// `c * n^e`
    Poly(u64, u32),
    /// Explicit `(n, rc(n))` points; a size between points takes the next
    /// tabulated value, and sizes past the last point are undefined.
    Table(Vec<(u64, u64)>),
}

impl RcFunction {
    pub fn eval(&self, n: u64) -> Result<u64> {
        match self {
            RcFunction::Linear(c) => c.checked_mul(n).ok_or(Error::RcUndefined(n)),
            RcFunction::Poly(c, e) => n
                .checked_pow(*e)
                .and_then(|p| p.checked_mul(*c))
                .ok_or(Error::RcUndefined(n)),
            RcFunction::Table(points) => points
                .iter()
                .find(|(m, _)| *m >= n)
                .map(|(_, v)| *v)
                .ok_or(Error::RcUndefined(n)),
        }
    }

    /// Checks that a table is sorted and nondecreasing.
    pub fn validate(&self) -> Result<()> {
        if let RcFunction::Table(points) = self {
            for w in points.windows(2) {
                if w[0].0 >= w[1].0 || w[0].1 > w[1].1 {
                    return Err(Error::InvalidValue(format!(
                        "rc table must increase in size and not decrease in value near n={}",
                        w[1].0
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for RcFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RcFunction::Linear(1) => write!(f, "n"),
            RcFunction::Linear(c) => write!(f, "{c}*n"),
            RcFunction::Poly(c, e) => write!(f, "{c}*n^{e}"),
            RcFunction::Table(points) => {
                let pts: Vec<String> = points.iter().map(|(n, v)| format!("{n}:{v}")).collect();
                write!(f, "table[{}]", pts.join(", "))
            }
        }
    }
}

/// Parses `linear:c` and `poly:c,e`.
impl FromStr for RcFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidValue(format!("rc function `{s}`: expected linear:c or poly:c,e"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "linear" => rest
                .trim()
                .parse()
                .map(RcFunction::Linear)
                .map_err(|_| bad()),
            "poly" => {
                let (c, e) = rest.split_once(',').ok_or_else(bad)?;
                Ok(RcFunction::Poly(
                    c.trim().parse().map_err(|_| bad())?,
                    e.trim().parse().map_err(|_| bad())?,
                ))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for RcFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        display(self, s)
    }
}

/// The assignment built from a runtime bound. Values are exact big integers;
/// the defined-symbol functions are not polynomial, so this is a semantic
/// object rather than an [`Assignment`](crate::Assignment).
#[derive(Clone, Debug)]
pub struct RcInterpretation {
    pub rc: RcFunction,
    pub trs_size: u64,
    symbols: BTreeMap<String, (SymbolKind, usize)>,
    order: Vec<String>,
}

pub fn construct_si_from_rc(trs: &Trs, rc: RcFunction) -> Result<RcInterpretation> {
    rc.validate()?;
    Ok(RcInterpretation {
        rc,
        trs_size: trs.size() as u64,
        symbols: trs
            .signature()
            .iter()
            .map(|s| (s.name.to_string(), (s.kind, s.arity)))
            .collect(),
        order: trs.signature().iter().map(|s| s.name.to_string()).collect(),
    })
}

impl RcInterpretation {
    /// One `symbol = function` line per symbol, in signature order.
    pub fn closed_form(&self) -> Vec<(String, String)> {
        self.order
            .iter()
            .map(|name| {
                let (kind, arity) = self.symbols[name];
                let sum = if arity == 0 {
                    "1".to_string()
                } else {
                    let xs: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
                    format!("{} + 1", xs.join(" + "))
                };
                let text = match (kind, arity) {
                    (SymbolKind::Constructor, 0) => "0".to_string(),
                    (SymbolKind::Constructor, _) => sum,
                    (SymbolKind::Defined, _) => format!("({sum}) * {}^rc({sum})", self.trs_size),
                };
                (name.clone(), text)
            })
            .collect()
    }
}

impl fmt::Display for RcInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# rc(n) = {}, |P| = {}", self.rc, self.trs_size)?;
        for (name, text) in self.closed_form() {
            writeln!(f, "{name} = {text}")?;
        }
        Ok(())
    }
}

impl SymbolInterpretation for RcInterpretation {
    fn eval_symbol(&self, name: &str, args: &[Scalar]) -> Result<Scalar> {
        let base = name.strip_suffix('#').unwrap_or(name);
        let &(kind, arity) = self
            .symbols
            .get(base)
            .ok_or_else(|| Error::UnknownSymbol(base.into()))?;
        if args.len() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: args.len(),
            });
        }
        let sum = args.iter().cloned().sum::<Scalar>() + Scalar::one();
        match (kind, arity) {
            (SymbolKind::Constructor, 0) => Ok(Scalar::zero()),
            (SymbolKind::Constructor, _) => Ok(sum),
            (SymbolKind::Defined, _) => {
                let n = sum
                    .ceil()
                    .to_u64()
                    .ok_or_else(|| Error::InvalidValue(format!("size {sum} out of range")))?;
                let steps = self.rc.eval(n)?;
                let steps = u32::try_from(steps).map_err(|_| Error::RcUndefined(n))?;
                let factor = num_traits::pow(BigInt::from(self.trs_size), steps as usize);
                Ok(&sum * &Scalar::from_bigint(factor).expect("nonnegative"))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeLemmaReport {
    /// Steps `t ->^n s` compared, over all traces.
    pub checked: usize,
    /// `(trace, step)` pairs where `|s| > |t| * |P|^n`.
    pub violations: Vec<(usize, usize)>,
    /// Largest `|s| / (|t| * |P|^n)` seen, with its trace and step.
    #[serde(serialize_with = "display_opt")]
    pub tightest: Option<Scalar>,
    pub tightest_at: Option<(usize, usize)>,
}

/// Checks `|s| <= |t| * |P|^n` exactly for every suffix step of every trace,
/// where `t` is the first term of the trace and `s` its `n`th successor.
pub fn check_size_lemma(trs: &Trs, traces: &[Vec<Term>]) -> SizeLemmaReport {
    let p = BigInt::from(trs.size());
    let mut report = SizeLemmaReport::default();
    // the tightest ratio is kept unreduced; cross multiplication is far
    // cheaper than normalizing a fraction with a huge denominator
    let mut best: Option<(BigInt, BigInt)> = None;
    for (ti, trace) in traces.iter().enumerate() {
        let Some(t) = trace.first() else { continue };
        let mut bound = BigInt::from(t.size());
        for (n, s) in trace.iter().enumerate() {
            if n > 0 {
                bound *= &p;
            }
            report.checked += 1;
            let size = BigInt::from(s.size());
            if size > bound {
                report.violations.push((ti, n));
            }
            if best
                .as_ref()
                .is_none_or(|(bs, bb)| &size * bb > bs * &bound)
            {
                best = Some((size, bound.clone()));
                report.tightest_at = Some((ti, n));
            }
        }
    }
    report.tightest = best.map(|(s, b)| {
        Scalar::from_rational(num_rational::BigRational::new(s, b)).expect("nonnegative")
    });
    report
}

/// Innermost traces from `count` random basic terms of sizes `1..=max_size`.
/// Traces stopped by `max_steps` are kept as they are.
pub fn random_traces(
    trs: &Trs,
    count: usize,
    max_size: usize,
    max_steps: usize,
    seed: u64,
) -> Vec<Vec<Term>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(smallest) = (1..=max_size).find(|&n| !basic_terms(trs, n).is_empty()) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 10 {
        attempts += 1;
        let n = rand::Rng::gen_range(&mut rng, smallest..=max_size);
        if let Some(t) = random_basic_term(trs, n, &mut rng) {
            out.push(normalize_traced(trs, &t, max_steps).1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::{parse_term, parse_trs};
    use crate::verifier::empirical_si_check;

    const DOUBLING: &str = "d(0) -> 0\nd(s(x)) -> s(s(d(x)))";

    #[test]
    fn doubling_rc() {
        let trs = parse_trs(DOUBLING).unwrap();
        let r = measure_rc(&trs, 5, 10_000, 1);
        let rc: Vec<Option<u64>> = (1..=5).map(|n| r.rc(n)).collect();
        // dl(d(s^k(0))) = k + 1 and |d(s^k(0))| = k + 2
        assert_eq!(rc, vec![Some(0), Some(1), Some(2), Some(3), Some(4)]);
        assert_eq!(
            r.entries[2].witness,
            Some(parse_term("d(s(0))", &trs).unwrap())
        );
        assert!(!r.approximate);
    }

    #[test]
    fn nothing_defined() {
        let trs = Trs::with_symbols(vec![], &[("0".into(), 0), ("s".into(), 1)]).unwrap();
        let r = measure_rc(&trs, 4, 100, 1);
        assert!(r.entries.iter().all(|e| e.rc() == Some(0) && e.terms == 0));
    }

    #[test]
    fn looping_is_flagged() {
        let trs = parse_trs("f(0) -> f(0)").unwrap();
        let r = measure_rc(&trs, 4, 100, 1);
        assert_eq!(r.rc(1), Some(0));
        for n in 2..=4 {
            assert_eq!(r.rc(n), None);
        }
        assert!(r.to_function().is_err());
    }

    #[test]
    fn sampled_sizes_are_approximate() {
        let trs = parse_trs(DOUBLING).unwrap();
        let r = measure_rc(&trs, 14, 10_000, 1);
        assert!(r.approximate);
        assert_eq!(r.rc(14), Some(13));
    }

    #[test]
    fn theta_values() {
        let trs = parse_trs("f(x) -> x\ng(x) -> 0").unwrap();
        let mut theta = construct_si_from_rc(&trs, RcFunction::Linear(1)).unwrap();
        theta.trs_size = 5;
        // arity one, |P| = 5, rc(n) = n: (2 + 1) * 5^3
        assert_eq!(
            theta.eval_symbol("f", &[Scalar::from_int(2)]).unwrap(),
            Scalar::from_int(375)
        );
        assert_eq!(theta.eval_symbol("0", &[]).unwrap(), Scalar::zero());
    }

    #[test]
    fn table_lookup() {
        let f = RcFunction::Table(vec![(1, 0), (3, 2), (4, 3)]);
        assert_eq!(f.eval(2).unwrap(), 2);
        assert_eq!(f.eval(4).unwrap(), 3);
        assert_eq!(f.eval(5), Err(Error::RcUndefined(5)));
        assert!(RcFunction::Table(vec![(1, 2), (2, 1)]).validate().is_err());
    }

    #[test]
    fn parse_rc() {
        assert_eq!(
            "linear:1".parse::<RcFunction>().unwrap(),
            RcFunction::Linear(1)
        );
        assert_eq!(
            "poly:2,3".parse::<RcFunction>().unwrap(),
            RcFunction::Poly(2, 3)
        );
        assert!("cubic:1".parse::<RcFunction>().is_err());
        assert_eq!(RcFunction::Poly(2, 3).to_string(), "2*n^3");
    }

    #[test]
    fn closed_form_text() {
        let trs = parse_trs(DOUBLING).unwrap();
        let theta = construct_si_from_rc(&trs, RcFunction::Linear(1)).unwrap();
        let text = theta.to_string();
        assert!(text.contains("d = (X1 + 1) * 10^rc(X1 + 1)"), "{text}");
        assert!(text.contains("s = X1 + 1"));
        assert!(text.contains("0 = 0"));
    }

    #[test]
    fn doubling_theta_is_a_bound() {
        let trs = parse_trs(DOUBLING).unwrap();
        let rc = measure_rc(&trs, 8, 10_000, 1).to_function().unwrap();
        let theta = construct_si_from_rc(&trs, rc).unwrap();
        let r = empirical_si_check(&trs, &theta, &basic_terms(&trs, 8), 10_000).unwrap();
        assert_eq!(r.checked, 7);
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn size_lemma_on_traces() {
        let trs = parse_trs(DOUBLING).unwrap();
        let t = parse_term("d(s(s(0)))", &trs).unwrap();
        let trace = normalize_traced(&trs, &t, 100).1;
        let r = check_size_lemma(&trs, std::slice::from_ref(&trace));
        assert!(r.violations.is_empty());
        assert_eq!(r.checked, trace.len());
        // the zero-step comparison is an equality
        assert_eq!(r.tightest, Some(Scalar::one()));

        let dup = parse_trs("g(x) -> c(x, x)").unwrap();
        let t = Term::app("g", vec![Term::app("s", vec![Term::constant("0")])]);
        let r = check_size_lemma(&dup, &[normalize_traced(&dup, &t, 10).1]);
        assert!(r.violations.is_empty());
        assert_eq!(r.checked, 2);
    }

    #[test]
    fn random_traces_are_reproducible() {
        let trs = parse_trs(DOUBLING).unwrap();
        let a = random_traces(&trs, 20, 8, 1000, 3);
        assert_eq!(a, random_traces(&trs, 20, 8, 1000, 3));
        assert_eq!(a.len(), 20);
    }
}
