//! Searching for QI and DPI assignments.
//!
//! [`synthesize`] enumerates bounded max-plus candidates. Candidates are
//! ranked by weight, the sum of all coefficient numerators plus the number of
//! branches. The winner minimizes the total weight, with ties broken by the
//! per-symbol candidate indices read in signature order. The search is a
//! depth-first branch and bound which rejects a partial assignment as soon as
//! one fully assigned constraint is not proved.
//!
//! [`synthesize_linear_template`] handles single-branch affine functions
//! exactly: slopes come from a small grid and the constants from a linear
//! program.

mod linear;

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use linear::{synthesize_linear_template, SLOPE_GRID};

use crate::assignment::{extend_to_term, Assignment};
use crate::deppairs::dependency_pairs;
use crate::error::{Error, Result};
use crate::maxpoly::{check_geq_uniform, poly_dominates, MaxPolyFn, Poly, SamplingPlan};
use crate::scalar::Scalar;
use crate::trs::{Name, Term, Trs};
use crate::verifier::{verify, Criterion, Report, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Naturals,
    /// Reduced fractions whose numerator and denominator are at most the bound.
    Rationals(u64),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Naturals => write!(f, "nat"),
            Domain::Rationals(d) => write!(f, "rat:{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisConfig {
    /// `Qi` or `Dpi`.
    pub kind: Criterion,
    pub domain: Domain,
    /// Largest number of max branches per defined symbol.
    pub max_branches: usize,
    /// Largest coefficient or constant.
    pub coeff_bound: u64,
    pub relax_nullary: Option<Scalar>,
    pub timeout: Option<Duration>,
    /// Used only for the witnesses of the final certificate.
    pub sampling: SamplingPlan,
}

impl SynthesisConfig {
    pub fn new(kind: Criterion, domain: Domain, max_branches: usize, coeff_bound: u64) -> Self {
        SynthesisConfig {
            kind,
            domain,
            max_branches,
            coeff_bound,
            relax_nullary: None,
            timeout: None,
            sampling: SamplingPlan::quick(),
        }
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            relax_nullary: self.relax_nullary.clone(),
            sampling: self.sampling.clone(),
            ..VerifyOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.kind == Criterion::Pi {
            return Err(Error::InvalidValue(
                "synthesis supports qi and dpi only".into(),
            ));
        }
        if self.max_branches == 0 || self.coeff_bound == 0 || self.domain == Domain::Rationals(0) {
            return Err(Error::InvalidValue(
                "branch count and bounds must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Allowed coefficient values in increasing order, 0 included.
    pub fn value_grid(&self) -> Vec<Scalar> {
        let d = self.coeff_bound;
        let mut vals: BTreeSet<Scalar> = BTreeSet::new();
        match self.domain {
            Domain::Naturals => vals.extend((0..=d).map(Scalar::from_int)),
            Domain::Rationals(r) => {
                for p in 0..=r {
                    for q in 1..=r {
                        let v = Scalar::ratio(p, q);
                        if v <= Scalar::from_int(d) {
                            vals.insert(v);
                        }
                    }
                }
            }
        }
        vals.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    Exhausted,
    TimedOut,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Found => "found",
            Status::Exhausted => "exhausted",
            Status::TimedOut => "timed out",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisResult {
    pub status: Status,
    pub assignment: Option<Assignment>,
    /// The verifier report of the found assignment; always valid.
    pub certificate: Option<Report>,
    pub candidates_tried: u64,
}

impl SynthesisResult {
    fn without(status: Status, candidates_tried: u64) -> Self {
        SynthesisResult {
            status,
            assignment: None,
            certificate: None,
            candidates_tried,
        }
    }

    fn found(trs: &Trs, a: Assignment, cfg: &SynthesisConfig, tried: u64) -> Result<Self> {
        let report = verify(trs, &a, cfg.kind, &cfg.verify_options())?;
        if !report.is_valid() {
            return Err(Error::InvalidValue(format!(
                "internal: synthesized assignment is not certified\n{report}"
            )));
        }
        Ok(SynthesisResult {
            status: Status::Found,
            assignment: Some(a),
            certificate: Some(report),
            candidates_tried: tried,
        })
    }
}

/// Weight used for ranking: coefficient numerators plus branch count.
pub fn weight(f: &MaxPolyFn) -> u64 {
    f.branches()
        .iter()
        .map(|b| {
            1 + b
                .terms()
                .map(|(_, c)| u64::try_from(c.numer()).unwrap_or(u64::MAX))
                .sum::<u64>()
        })
        .sum()
}

/// Upper limit on generated candidates per symbol.
pub const CANDIDATE_CAP: usize = 2_000_000;

fn all_affine(arity: usize, grid: &[Scalar]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(arity)];
    for slot in 0..=arity {
        let mut next = Vec::with_capacity(out.len() * grid.len());
        for p in &out {
            for v in grid {
                let mut e = vec![0; arity];
                if slot > 0 {
                    e[slot - 1] = 1;
                }
                next.push(p.add(&Poly::monomial(arity, e, v.clone())));
            }
        }
        out = next;
    }
    out
}

/// Every function with at most `k` affine branches over `grid`. When
/// `canonical`, combinations in which one branch dominates another are
/// skipped, since dropping the dominated branch gives the same function.
pub fn maxplus_functions(
    arity: usize,
    grid: &[Scalar],
    k: usize,
    canonical: bool,
) -> Result<Vec<MaxPolyFn>> {
    let polys = all_affine(arity, grid);
    let mut estimate = 0f64;
    for j in 1..=k {
        estimate += (polys.len() as f64).powi(j as i32);
    }
    if estimate > CANDIDATE_CAP as f64 * 4.0 {
        return Err(Error::InvalidValue(format!(
            "candidate space for arity {arity} is too large; lower the bounds"
        )));
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    fn rec(
        polys: &[Poly],
        k: usize,
        canonical: bool,
        start: usize,
        combo: &mut Vec<usize>,
        out: &mut Vec<MaxPolyFn>,
    ) {
        for i in start..polys.len() {
            if canonical
                && combo.iter().any(|&j| {
                    poly_dominates(&polys[j], &polys[i]).holds()
                        || poly_dominates(&polys[i], &polys[j]).holds()
                })
            {
                continue;
            }
            combo.push(i);
            out.push(MaxPolyFn::new(
                polys[0].arity(),
                combo.iter().map(|&j| polys[j].clone()).collect(),
            ));
            if combo.len() < k {
                rec(polys, k, canonical, i + 1, combo, out);
            }
            combo.pop();
        }
    }
    rec(&polys, k, canonical, 0, &mut combo, &mut out);
    if out.len() > CANDIDATE_CAP {
        return Err(Error::InvalidValue(format!(
            "candidate space for arity {arity} is too large; lower the bounds"
        )));
    }
    Ok(out)
}

fn sort_by_weight(fs: &mut [MaxPolyFn]) {
    fs.sort_by_cached_key(|f| (weight(f), f.branches().to_vec()));
}

/// Candidate functions per symbol, in signature order and search rank.
pub fn candidate_lists(trs: &Trs, cfg: &SynthesisConfig) -> Result<Vec<Vec<MaxPolyFn>>> {
    cfg.validate()?;
    let grid = cfg.value_grid();
    let one = Scalar::one();
    let mut lists = Vec::new();
    for s in trs.signature() {
        let mut fs: Vec<MaxPolyFn> = if s.is_constructor() && s.arity > 0 {
            grid.iter()
                .filter(|v| **v >= one)
                .map(|v| MaxPolyFn::poly(Poly::sum_plus(s.arity, v.clone())))
                .collect()
        } else if s.is_constructor() {
            match &cfg.relax_nullary {
                None => vec![MaxPolyFn::zero(0)],
                Some(b) => grid
                    .iter()
                    .filter(|v| *v <= b)
                    .map(|v| MaxPolyFn::constant(0, v.clone()))
                    .collect(),
            }
        } else {
            let mut fs = maxplus_functions(s.arity, &grid, cfg.max_branches, true)?;
            if cfg.kind == Criterion::Qi {
                fs.retain(|f| {
                    (0..s.arity).all(|j| {
                        check_geq_uniform(f, &MaxPolyFn::projection(s.arity, j))
                            .expect("same arity")
                            .holds()
                    })
                });
            }
            fs
        };
        sort_by_weight(&mut fs);
        lists.push(fs);
    }
    Ok(lists)
}

struct Goal {
    lhs: Term,
    rhs: Term,
    vars: Vec<Name>,
}

fn goals(trs: &Trs, kind: Criterion) -> Vec<(Goal, BTreeSet<usize>)> {
    let mut pairs: Vec<(Term, Term)> = trs
        .rules()
        .iter()
        .map(|r| (r.lhs.clone(), r.rhs.clone()))
        .collect();
    if kind == Criterion::Dpi {
        pairs.extend(dependency_pairs(trs).into_iter().map(|dp| (dp.lhs, dp.rhs)));
    }
    let index_of = |n: &Name| {
        trs.signature()
            .iter()
            .position(|s| s.name == *n)
            .expect("known symbol")
    };
    pairs
        .into_iter()
        .map(|(lhs, rhs)| {
            let syms: BTreeSet<usize> = lhs.symbols().union(&rhs.symbols()).map(index_of).collect();
            let vars = lhs.vars();
            (Goal { lhs, rhs, vars }, syms)
        })
        .collect()
}

struct Search<'a> {
    lists: &'a [Vec<MaxPolyFn>],
    weights: Vec<Vec<u64>>,
    names: Vec<Name>,
    order: Vec<usize>,
    /// Goals that become fully assigned at each depth.
    due: Vec<Vec<Goal>>,
    lower: Vec<u64>,
    current: Assignment,
    picks: Vec<usize>,
    tried: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    best: Option<(u64, Vec<usize>)>,
    /// In collecting mode every solution is kept and nothing is pruned by cost.
    collect: Option<(usize, Vec<Vec<usize>>)>,
}

impl<'a> Search<'a> {
    fn new(trs: &Trs, cfg: &SynthesisConfig, lists: &'a [Vec<MaxPolyFn>]) -> Self {
        let n = lists.len();
        let mut pending = goals(trs, cfg.kind);
        let mut order = Vec::with_capacity(n);
        let mut assigned = BTreeSet::new();
        let mut due = Vec::with_capacity(n);
        while order.len() < n {
            // pick the symbol that completes the most goals; ties go to signature order
            let next = (0..n)
                .filter(|s| !assigned.contains(s))
                .max_by_key(|&s| {
                    let done = pending
                        .iter()
                        .filter(|(_, syms)| syms.iter().all(|x| *x == s || assigned.contains(x)))
                        .count();
                    (done, std::cmp::Reverse(s))
                })
                .expect("unassigned symbol");
            assigned.insert(next);
            order.push(next);
            let (now, later): (Vec<_>, Vec<_>) = pending
                .into_iter()
                .partition(|(_, syms)| syms.iter().all(|x| assigned.contains(x)));
            pending = later;
            due.push(now.into_iter().map(|(g, _)| g).collect());
        }
        let weights: Vec<Vec<u64>> = lists
            .iter()
            .map(|l| l.iter().map(weight).collect())
            .collect();
        let mut lower = vec![0; n + 1];
        for d in (0..n).rev() {
            lower[d] = lower[d + 1] + weights[order[d]].first().copied().unwrap_or(0);
        }
        Search {
            lists,
            weights,
            names: trs.signature().iter().map(|s| s.name.clone()).collect(),
            order,
            due,
            lower,
            current: Assignment::new(),
            picks: vec![0; n],
            tried: 0,
            deadline: cfg.timeout.map(|t| Instant::now() + t),
            timed_out: false,
            best: None,
            collect: None,
        }
    }

    fn goals_hold(&self, depth: usize) -> bool {
        self.due[depth].iter().all(|g| {
            let l = extend_to_term(&self.current, &g.lhs, &g.vars).expect("assigned");
            let r = extend_to_term(&self.current, &g.rhs, &g.vars).expect("assigned");
            check_geq_uniform(&l, &r).expect("same arity").holds()
        })
    }

    fn run(&mut self, depth: usize, cost: u64) {
        if self.timed_out {
            return;
        }
        if depth == self.order.len() {
            if let Some((limit, found)) = &mut self.collect {
                if found.len() < *limit {
                    found.push(self.picks.clone());
                }
                return;
            }
            let key = (cost, self.picks.clone());
            if self.best.as_ref().is_none_or(|b| key < *b) {
                self.best = Some(key);
            }
            return;
        }
        let s = self.order[depth];
        for ci in 0..self.lists[s].len() {
            if let Some((limit, found)) = &self.collect {
                if found.len() >= *limit {
                    return;
                }
            }
            let c = cost + self.weights[s][ci];
            if self.collect.is_none() {
                if let Some((b, _)) = &self.best {
                    // lists are sorted by weight, so nothing later can win
                    if c + self.lower[depth + 1] > *b {
                        break;
                    }
                }
            }
            self.tried += 1;
            if self.tried % 256 == 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
                self.timed_out = true;
                return;
            }
            self.current
                .insert(&*self.names[s], self.lists[s][ci].clone());
            self.picks[s] = ci;
            if self.goals_hold(depth) {
                self.run(depth + 1, c);
            }
            if self.timed_out {
                return;
            }
        }
    }

    fn assignment(&self, picks: &[usize]) -> Assignment {
        let mut a = Assignment::new();
        for (s, &ci) in picks.iter().enumerate() {
            a.insert(&*self.names[s], self.lists[s][ci].clone());
        }
        a
    }
}

/// Finds the lowest-weight assignment in the configured space that the
/// verifier certifies, or reports that there is none.
pub fn synthesize(trs: &Trs, cfg: &SynthesisConfig) -> Result<SynthesisResult> {
    let lists = candidate_lists(trs, cfg)?;
    if lists.iter().any(Vec::is_empty) {
        return Ok(SynthesisResult::without(Status::Exhausted, 0));
    }
    let mut search = Search::new(trs, cfg, &lists);
    search.run(0, 0);
    if search.timed_out {
        return Ok(SynthesisResult::without(Status::TimedOut, search.tried));
    }
    match search.best.take() {
        Some((_, picks)) => {
            let a = search.assignment(&picks);
            SynthesisResult::found(trs, a, cfg, search.tried)
        }
        None => Ok(SynthesisResult::without(Status::Exhausted, search.tried)),
    }
}

/// Up to `limit` certified assignments of the configured space, in search
/// order. Symmetric to [`synthesize`] but without cost pruning.
pub fn synthesize_all(trs: &Trs, cfg: &SynthesisConfig, limit: usize) -> Result<Vec<Assignment>> {
    let lists = candidate_lists(trs, cfg)?;
    if lists.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut search = Search::new(trs, cfg, &lists);
    search.collect = Some((limit, Vec::new()));
    search.run(0, 0);
    if search.timed_out {
        return Err(Error::InvalidValue(
            "timed out while collecting assignments".into(),
        ));
    }
    let (_, found) = search.collect.take().expect("collecting");
    Ok(found.iter().map(|p| search.assignment(p)).collect())
}
