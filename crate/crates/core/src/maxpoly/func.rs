use std::fmt;

use serde::Serialize;

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `max(P1, ..., Pk)` over polynomials of a common arity. Branches are kept in
/// insertion order with exact duplicates removed; there is always at least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPolyFn {
    arity: usize,
    branches: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degrees {
    pub xdegree: u32,
    pub maxdegree: usize,
    /// Only for functions whose branches are all affine.
    pub plusdegree: Option<Scalar>,
}

impl MaxPolyFn {
    /// Panics if `branches` is empty or arities disagree.
    pub fn new(arity: usize, branches: Vec<Poly>) -> MaxPolyFn {
        assert!(!branches.is_empty(), "max over no branches");
        let mut out: Vec<Poly> = Vec::with_capacity(branches.len());
        for b in branches {
            assert_eq!(b.arity(), arity, "branch arity");
            if !out.contains(&b) {
                out.push(b);
            }
        }
        MaxPolyFn {
            arity,
            branches: out,
        }
    }

    pub fn poly(p: Poly) -> MaxPolyFn {
        MaxPolyFn {
            arity: p.arity(),
            branches: vec![p],
        }
    }

    pub fn constant(arity: usize, c: Scalar) -> MaxPolyFn {
        MaxPolyFn::poly(Poly::constant(arity, c))
    }

    pub fn zero(arity: usize) -> MaxPolyFn {
        MaxPolyFn::poly(Poly::zero(arity))
    }

    /// `X{i+1}`.
    pub fn projection(arity: usize, i: usize) -> MaxPolyFn {
        MaxPolyFn::poly(Poly::var(arity, i))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn branches(&self) -> &[Poly] {
        &self.branches
    }

    pub fn is_affine(&self) -> bool {
        self.branches.iter().all(Poly::is_affine)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        self.branches
            .iter()
            .map(|b| b.eval(point))
            .max()
            .expect("nonempty branches")
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.branches
            .iter()
            .map(|b| b.eval_f64(point))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn pairwise(&self, other: &MaxPolyFn, op: impl Fn(&Poly, &Poly) -> Poly) -> MaxPolyFn {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = Vec::with_capacity(self.branches.len() * other.branches.len());
        for p in &self.branches {
            for q in &other.branches {
                out.push(op(p, q));
            }
        }
        MaxPolyFn::new(self.arity, out)
    }

    /// Pointwise sum; distributes over max.
    pub fn add(&self, other: &MaxPolyFn) -> MaxPolyFn {
        self.pairwise(other, Poly::add)
    }

    /// Pointwise product; distributes over max since all values are nonnegative.
    pub fn mul(&self, other: &MaxPolyFn) -> MaxPolyFn {
        self.pairwise(other, Poly::mul)
    }

    pub fn max(&self, other: &MaxPolyFn) -> MaxPolyFn {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        MaxPolyFn::new(
            self.arity,
            self.branches
                .iter()
                .chain(&other.branches)
                .cloned()
                .collect(),
        )
    }

    pub fn add_const(&self, c: &Scalar) -> MaxPolyFn {
        self.add(&MaxPolyFn::constant(self.arity, c.clone()))
    }

    pub fn scale(&self, c: &Scalar) -> MaxPolyFn {
        MaxPolyFn::new(
            self.arity,
            self.branches.iter().map(|b| b.scale(c)).collect(),
        )
    }

    /// `self(args[0], ..., args[n-1])`. Every polynomial branch is monotone,
    /// so a branch applied to maxima is the max over all choices of argument
    /// branches; only arguments the branch actually uses are expanded.
    pub fn compose(&self, args: &[MaxPolyFn]) -> Result<MaxPolyFn> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let arity = match args.first() {
            Some(a) => a.arity,
            None => 0,
        };
        if let Some(bad) = args.iter().find(|a| a.arity != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: bad.arity,
            });
        }
        let mut out = Vec::new();
        for branch in &self.branches {
            let used = branch.used_vars();
            let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
            for &u in &used {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        (0..args[u].branches.len()).map(move |j| {
                            let mut c = c.clone();
                            c.push(j);
                            c
                        })
                    })
                    .collect();
            }
            for combo in combos {
                let picked: Vec<Poly> = (0..self.arity)
                    .map(|i| match used.iter().position(|&u| u == i) {
                        Some(slot) => args[i].branches[combo[slot]].clone(),
                        None => Poly::zero(arity),
                    })
                    .collect();
                out.push(branch.compose(&picked, arity));
            }
        }
        Ok(MaxPolyFn::new(arity, out))
    }

    /// Reads a nullary function as a constant function of `arity` arguments.
    pub fn lift_constant(&self, arity: usize) -> MaxPolyFn {
        assert_eq!(self.arity, 0, "only nullary functions can be lifted");
        MaxPolyFn::new(
            arity,
            self.branches
                .iter()
                .map(|b| Poly::constant(arity, b.constant_term()))
                .collect(),
        )
    }

    /// Drops branches that are coefficientwise dominated by another branch.
    /// The pointwise value is unchanged.
    pub fn prune_dominated(&self) -> MaxPolyFn {
        let keep: Vec<Poly> = self
            .branches
            .iter()
            .enumerate()
            .filter(|(i, b)| {
                !self
                    .branches
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != *i && other.dominates(b))
            })
            .map(|(_, b)| b.clone())
            .collect();
        MaxPolyFn::new(self.arity, keep)
    }

    pub fn degrees(&self) -> Degrees {
        let xdegree = self.branches.iter().map(Poly::degree).max().unwrap_or(0);
        let plusdegree = self.is_affine().then(|| {
            self.branches
                .iter()
                .flat_map(|b| b.terms().map(|(_, c)| c.clone()))
                .max()
                .unwrap_or_default()
        });
        Degrees {
            xdegree,
            maxdegree: self.branches.len(),
            plusdegree,
        }
    }
}

impl fmt::Display for MaxPolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branches.len() == 1 {
            return write!(f, "{}", self.branches[0]);
        }
        write!(f, "max(")?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for MaxPolyFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
