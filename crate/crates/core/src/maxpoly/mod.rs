//! Max-polynomial functions over nonnegative rationals.

pub mod approx;
mod expr;
mod func;
mod ineq;
mod parse;
mod poly;

pub use expr::{eval_expr, normalize_fn, FnExpr};
pub use func::{Degrees, MaxPolyFn};
pub(crate) use ineq::find_violation;
pub use ineq::{
    check_clause_uniform, check_geq_uniform, check_gt_uniform, cnf_holds_at, decompose_geq,
    poly_dominates, poly_dominates_strictly, refute_by_sampling, Atom, Check, Clause, SamplingPlan,
    DEFAULT_SEED,
};
pub use parse::parse_fn;
pub use poly::{Exponents, Poly};
