use super::func::MaxPolyFn;
use super::poly::Poly;
use crate::scalar::Scalar;

/// An unnormalized expression over `+`, `*`, `max` and constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnExpr {
    /// 0-based argument index.
    Var(usize),
    Const(Scalar),
    Add(Box<FnExpr>, Box<FnExpr>),
    Mul(Box<FnExpr>, Box<FnExpr>),
    Max(Vec<FnExpr>),
}

// constructors, not operators: both operands are taken by value and boxed
#[allow(clippy::should_implement_trait)]
impl FnExpr {
    pub fn add(a: FnExpr, b: FnExpr) -> FnExpr {
        FnExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: FnExpr, b: FnExpr) -> FnExpr {
        FnExpr::Mul(Box::new(a), Box::new(b))
    }

    /// Largest variable index plus one.
    pub fn min_arity(&self) -> usize {
        match self {
            FnExpr::Var(i) => i + 1,
            FnExpr::Const(_) => 0,
            FnExpr::Add(a, b) | FnExpr::Mul(a, b) => a.min_arity().max(b.min_arity()),
            FnExpr::Max(xs) => xs.iter().map(FnExpr::min_arity).max().unwrap_or(0),
        }
    }
}

/// Brings `e` into `max(P1, ..., Pk)` form. Panics if a variable index is out
/// of range or a `max` node is empty.
pub fn normalize_fn(e: &FnExpr, arity: usize) -> MaxPolyFn {
    match e {
        FnExpr::Var(i) => MaxPolyFn::projection(arity, *i),
        FnExpr::Const(c) => MaxPolyFn::constant(arity, c.clone()),
        FnExpr::Add(a, b) => normalize_fn(a, arity).add(&normalize_fn(b, arity)),
        FnExpr::Mul(a, b) => normalize_fn(a, arity).mul(&normalize_fn(b, arity)),
        FnExpr::Max(xs) => {
            assert!(!xs.is_empty(), "empty max");
            let branches: Vec<Poly> = xs
                .iter()
                .flat_map(|x| normalize_fn(x, arity).branches().to_vec())
                .collect();
            MaxPolyFn::new(arity, branches)
        }
    }
}

/// Direct evaluation, without normalizing.
pub fn eval_expr(e: &FnExpr, point: &[Scalar]) -> Scalar {
    match e {
        FnExpr::Var(i) => point[*i].clone(),
        FnExpr::Const(c) => c.clone(),
        FnExpr::Add(a, b) => eval_expr(a, point) + eval_expr(b, point),
        FnExpr::Mul(a, b) => eval_expr(a, point) * eval_expr(b, point),
        FnExpr::Max(xs) => xs
            .iter()
            .map(|x| eval_expr(x, point))
            .max()
            .expect("nonempty max"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_distributes_over_max() {
        // max(X, Y) + Z
        let e = FnExpr::add(
            FnExpr::Max(vec![FnExpr::Var(0), FnExpr::Var(1)]),
            FnExpr::Var(2),
        );
        assert_eq!(normalize_fn(&e, 3).to_string(), "max(X1 + X3, X2 + X3)");
    }

    #[test]
    fn single_monomial_is_one_branch() {
        let e = FnExpr::mul(
            FnExpr::Const(Scalar::from_int(3)),
            FnExpr::mul(FnExpr::Var(0), FnExpr::Var(1)),
        );
        let f = normalize_fn(&e, 2);
        assert_eq!(f.branches().len(), 1);
        assert_eq!(f.to_string(), "3*X1*X2");
    }
}
