use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::func::MaxPolyFn;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of a sufficient check: either proved, or not proved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Holds,
    Unknown,
}

impl Check {
    pub fn holds(self) -> bool {
        self == Check::Holds
    }

    fn from_bool(b: bool) -> Check {
        if b {
            Check::Holds
        } else {
            Check::Unknown
        }
    }
}

/// `lhs >= rhs` between two polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub lhs: Poly,
    pub rhs: Poly,
}

impl Atom {
    pub fn holds_at(&self, point: &[Scalar]) -> bool {
        self.lhs.eval(point) >= self.rhs.eval(point)
    }
}

/// A disjunction of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause(pub Vec<Atom>);

impl Clause {
    pub fn holds_at(&self, point: &[Scalar]) -> bool {
        self.0.iter().any(|a| a.holds_at(point))
    }
}

/// `q >= q'` as a conjunction over the branches `Rj` of `q'` of the
/// disjunction over branches `Pi` of `q` of `Pi >= Rj`.
pub fn decompose_geq(q: &MaxPolyFn, q2: &MaxPolyFn) -> Result<Vec<Clause>> {
    if q.arity() != q2.arity() {
        return Err(Error::ArityMismatch {
            expected: q.arity(),
            got: q2.arity(),
        });
    }
    Ok(q2
        .branches()
        .iter()
        .map(|r| {
            Clause(
                q.branches()
                    .iter()
                    .map(|p| Atom {
                        lhs: p.clone(),
                        rhs: r.clone(),
                    })
                    .collect(),
            )
        })
        .collect())
}

pub fn cnf_holds_at(clauses: &[Clause], point: &[Scalar]) -> bool {
    clauses.iter().all(|c| c.holds_at(point))
}

/// Absolute positiveness of `p - r`: sound for all polynomials over the
/// nonnegative orthant and complete when both sides are affine.
pub fn poly_dominates(p: &Poly, r: &Poly) -> Check {
    Check::from_bool(p.difference(r).values().all(|c| !c.is_negative()))
}

/// `p - r` is absolutely positive with a strictly positive constant term,
/// so `p > r` everywhere on the orthant.
pub fn poly_dominates_strictly(p: &Poly, r: &Poly) -> Check {
    let diff = p.difference(r);
    let zero = vec![0; p.arity()];
    let constant_positive = diff.get(&zero).is_some_and(|c| c.is_positive());
    Check::from_bool(constant_positive && diff.values().all(|c| !c.is_negative()))
}

/// Holds iff a single atom of the clause dominates uniformly.
pub fn check_clause_uniform(clause: &Clause) -> Check {
    Check::from_bool(
        clause
            .0
            .iter()
            .any(|a| poly_dominates(&a.lhs, &a.rhs).holds()),
    )
}

/// Uniform check of every clause of `q >= q'`.
pub fn check_geq_uniform(q: &MaxPolyFn, q2: &MaxPolyFn) -> Result<Check> {
    let clauses = decompose_geq(q, q2)?;
    Ok(Check::from_bool(
        clauses.iter().all(|c| check_clause_uniform(c).holds()),
    ))
}

/// Uniform check of `q > q'` using strict atoms.
pub fn check_gt_uniform(q: &MaxPolyFn, q2: &MaxPolyFn) -> Result<Check> {
    let clauses = decompose_geq(q, q2)?;
    Ok(Check::from_bool(clauses.iter().all(|c| {
        c.0.iter()
            .any(|a| poly_dominates_strictly(&a.lhs, &a.rhs).holds())
    })))
}

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

/// Points tried when looking for a counterexample: a regular grid, coarse
/// denominators first, then seeded random rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingPlan {
    pub grid_max: u64,
    /// Each stage adds the points whose coordinates are multiples of `1/d`
    /// and were not produced by an earlier stage.
    pub grid_denominators: Vec<u64>,
    pub grid_cap: usize,
    pub random_points: usize,
    /// Random numerators lie in `0..=bound`, denominators in `1..=bound`.
    pub random_bound: u64,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            grid_max: 10,
            grid_denominators: vec![1, 2, 4],
            grid_cap: 100_000,
            random_points: 1_000,
            random_bound: 32,
            seed: DEFAULT_SEED,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(seed: u64) -> Self {
        SamplingPlan {
            seed,
            ..Self::default()
        }
    }

    /// A small plan for inner loops.
    pub fn quick() -> Self {
        SamplingPlan {
            grid_max: 4,
            grid_denominators: vec![1, 2],
            grid_cap: 2_000,
            random_points: 50,
            ..Self::default()
        }
    }

    /// Points as `(numerator, denominator)` pairs per coordinate.
    pub fn raw_points(&self, arity: usize) -> impl Iterator<Item = Vec<(u64, u64)>> + '_ {
        let grid = GridIter::new(self, arity).take(self.grid_cap);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let bound = self.random_bound.max(1);
        let random = (0..if arity == 0 { 0 } else { self.random_points }).map(move |_| {
            (0..arity)
                .map(|_| (rng.gen_range(0..=bound), rng.gen_range(1..=bound)))
                .collect()
        });
        grid.chain(random)
    }

    pub fn points(&self, arity: usize) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        self.raw_points(arity).map(|p| to_scalars(&p))
    }
}

fn to_scalars(p: &[(u64, u64)]) -> Vec<Scalar> {
    p.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect()
}

struct GridIter {
    arity: usize,
    max: u64,
    denoms: Vec<u64>,
    stage: usize,
    nums: Vec<u64>,
    done: bool,
    emitted_empty: bool,
}

impl GridIter {
    fn new(plan: &SamplingPlan, arity: usize) -> Self {
        GridIter {
            arity,
            max: plan.grid_max,
            denoms: plan.grid_denominators.clone(),
            stage: 0,
            nums: vec![0; arity],
            done: plan.grid_denominators.is_empty(),
            emitted_empty: false,
        }
    }

    fn covered_earlier(&self) -> bool {
        let d = self.denoms[self.stage];
        self.denoms[..self.stage]
            .iter()
            .any(|&e| self.nums.iter().all(|&n| (n * e) % d == 0))
    }

    fn advance(&mut self) {
        let limit = self.max * self.denoms[self.stage];
        for k in (0..self.arity).rev() {
            if self.nums[k] < limit {
                self.nums[k] += 1;
                return;
            }
            self.nums[k] = 0;
        }
        self.stage += 1;
        if self.stage == self.denoms.len() {
            self.done = true;
        }
    }
}

impl Iterator for GridIter {
    type Item = Vec<(u64, u64)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.arity == 0 {
            if self.emitted_empty {
                return None;
            }
            self.emitted_empty = true;
            return Some(Vec::new());
        }
        while !self.done {
            let d = self.denoms[self.stage];
            let skip = self.covered_earlier();
            let point: Vec<(u64, u64)> = self.nums.iter().map(|&n| (n, d)).collect();
            self.advance();
            if !skip {
                return Some(point);
            }
        }
        None
    }
}

fn to_f64(p: &[(u64, u64)]) -> Vec<f64> {
    p.iter().map(|&(n, d)| n as f64 / d as f64).collect()
}

/// First point of the plan where `q(x) < q'(x)`, confirmed exactly. Floating
/// point is only used to skip points that clearly satisfy the inequality.
pub fn refute_by_sampling(
    q: &MaxPolyFn,
    q2: &MaxPolyFn,
    plan: &SamplingPlan,
) -> Option<Vec<Scalar>> {
    find_violation(
        plan,
        q.arity(),
        |x| q.eval_f64(x) - q2.eval_f64(x),
        |x| q.eval_unchecked(x) < q2.eval_unchecked(x),
    )
}

/// Generic search: `approx_slack` estimates `lhs - rhs`; `violated` decides exactly.
pub(crate) fn find_violation(
    plan: &SamplingPlan,
    arity: usize,
    approx_slack: impl Fn(&[f64]) -> f64,
    violated: impl Fn(&[Scalar]) -> bool,
) -> Option<Vec<Scalar>> {
    for raw in plan.raw_points(arity) {
        let fx = to_f64(&raw);
        let slack = approx_slack(&fx);
        // Equalities are common; only near-violations are worth an exact check.
        if slack.is_finite() && slack > -1e-9 {
            continue;
        }
        let x = to_scalars(&raw);
        if violated(&x) {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxpoly::parse_fn;

    fn f(t: &str) -> MaxPolyFn {
        parse_fn(t, 1).unwrap()
    }

    fn p(t: &str) -> Poly {
        f(t).branches()[0].clone()
    }

    #[test]
    fn decomposition_shape() {
        let cl = decompose_geq(&f("max(2*X1, X1 + 1)"), &f("X1 + 2")).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].0.len(), 2);
        assert_eq!(check_clause_uniform(&cl[0]), Check::Unknown);

        let cl = decompose_geq(&f("X1"), &f("max(X1, 1)")).unwrap();
        assert_eq!(cl.len(), 2);
        assert!(!cnf_holds_at(&cl, &[Scalar::zero()]));
        assert!(cnf_holds_at(&cl, &[Scalar::from_int(2)]));
    }

    #[test]
    fn domination_examples() {
        assert_eq!(poly_dominates(&p("3*X1 + 4"), &p("X1 + 3")), Check::Holds);
        assert_eq!(poly_dominates(&p("X1"), &p("X1")), Check::Holds);
        assert_eq!(poly_dominates(&p("X1^2"), &p("2*X1")), Check::Unknown);
        assert_eq!(
            poly_dominates_strictly(&p("3*X1 + 4"), &p("3*X1 + 3")),
            Check::Holds
        );
        assert_eq!(
            poly_dominates_strictly(&p("2*X1 + 2"), &p("2*X1 + 2")),
            Check::Unknown
        );
    }

    #[test]
    fn clause_examples() {
        let holds = Clause(vec![
            Atom {
                lhs: p("X1 + 3"),
                rhs: p("X1 + 2"),
            },
            Atom {
                lhs: p("0"),
                rhs: p("X1"),
            },
        ]);
        assert_eq!(check_clause_uniform(&holds), Check::Holds);
        let trivial = Clause(vec![Atom {
            lhs: p("X1"),
            rhs: p("X1"),
        }]);
        assert_eq!(check_clause_uniform(&trivial), Check::Holds);
    }

    #[test]
    fn sampling_examples() {
        let plan = SamplingPlan::default();
        assert_eq!(
            refute_by_sampling(&f("X1"), &f("max(X1, 1)"), &plan),
            Some(vec![Scalar::zero()])
        );
        assert_eq!(refute_by_sampling(&f("X1 + 1"), &f("X1 + 1"), &plan), None);
        // true everywhere though no single branch dominates
        assert_eq!(
            refute_by_sampling(&f("max(2*X1, 2)"), &f("X1 + 1"), &plan),
            None
        );
        assert_eq!(
            refute_by_sampling(&f("1/2*X1 + 1/2"), &f("X1"), &plan),
            Some(vec![Scalar::from_int(2)])
        );
    }

    #[test]
    fn grid_stages_do_not_repeat() {
        let plan = SamplingPlan {
            grid_max: 2,
            random_points: 0,
            ..SamplingPlan::default()
        };
        let pts: Vec<Vec<Scalar>> = plan.points(1).collect();
        assert_eq!(pts.len(), 9);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
        assert_eq!(plan.points(2).count(), 81);
        assert_eq!(plan.points(0).count(), 1);
    }
}
