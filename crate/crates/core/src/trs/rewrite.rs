use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{Name, Term, Trs};

pub type Substitution = HashMap<Name, Term>;

pub const DEFAULT_NORMALIZE_STEPS: usize = 10_000;
pub const DEFAULT_DL_BUDGET: usize = 100_000;

/// Matches `pattern` against `term`. Repeated pattern variables must bind to
/// syntactically equal subterms.
pub fn match_pattern(pattern: &Term, term: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if match_into(pattern, term, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn match_into(pattern: &Term, term: &Term, sigma: &mut Substitution) -> bool {
    match (pattern, term) {
        (Term::Var(x), _) => match sigma.get(x) {
            Some(bound) => bound == term,
            None => {
                sigma.insert(x.clone(), term.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ts)) => {
            f == g
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|(p, t)| match_into(p, t, sigma))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

fn contract_at_root(trs: &Trs, t: &Term) -> Option<Term> {
    let root = t.root()?;
    trs.rules()
        .iter()
        .filter(|r| r.lhs.root() == Some(root))
        .find_map(|r| match_pattern(&r.lhs, t).map(|sigma| r.rhs.substitute(&sigma)))
}

/// Every one-step successor of `t`: positions in pre-order, then rule index.
pub fn rewrite_step(trs: &Trs, t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for (pos, sub) in t.subterms() {
        let Some(root) = sub.root() else { continue };
        for rule in trs.rules() {
            if rule.lhs.root() != Some(root) {
                continue;
            }
            if let Some(sigma) = match_pattern(&rule.lhs, sub) {
                out.push(t.replace_at(&pos.0, rule.rhs.substitute(&sigma)));
            }
        }
    }
    out
}

/// One leftmost-innermost step, or `None` at a normal form.
fn innermost_step(trs: &Trs, t: &Term) -> Option<Term> {
    let Term::App(f, args) = t else { return None };
    for (i, a) in args.iter().enumerate() {
        if let Some(a2) = innermost_step(trs, a) {
            // cloning only the siblings keeps a step linear in the depth
            let mut a2 = Some(a2);
            let args = args
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    if j == i {
                        a2.take().expect("once")
                    } else {
                        b.clone()
                    }
                })
                .collect();
            return Some(Term::App(f.clone(), args));
        }
    }
    contract_at_root(trs, t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeOutcome {
    /// Reached a constructor term.
    NormalForm { term: Term, steps: usize },
    /// Ran out of steps; `last` is the term reached.
    BudgetExceeded { last: Term, steps: usize },
    /// A normal form that still contains defined symbols or variables.
    StuckNonValue { term: Term, steps: usize },
}

impl NormalizeOutcome {
    pub fn value(&self) -> Option<&Term> {
        match self {
            NormalizeOutcome::NormalForm { term, .. } => Some(term),
            _ => None,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            NormalizeOutcome::NormalForm { steps, .. }
            | NormalizeOutcome::BudgetExceeded { steps, .. }
            | NormalizeOutcome::StuckNonValue { steps, .. } => *steps,
        }
    }
}

/// Leftmost-innermost normalization with a step budget.
pub fn normalize(trs: &Trs, t: &Term, max_steps: usize) -> NormalizeOutcome {
    run(trs, t, max_steps, None)
}

/// Like [`normalize`], also returning every intermediate term (starting with `t`).
pub fn normalize_traced(trs: &Trs, t: &Term, max_steps: usize) -> (NormalizeOutcome, Vec<Term>) {
    let mut trace = vec![t.clone()];
    let outcome = run(trs, t, max_steps, Some(&mut trace));
    (outcome, trace)
}

fn run(
    trs: &Trs,
    t: &Term,
    max_steps: usize,
    mut trace: Option<&mut Vec<Term>>,
) -> NormalizeOutcome {
    let mut current = t.clone();
    let mut steps = 0;
    loop {
        let next = innermost_step(trs, &current);
        match next {
            None if trs.is_value(&current) => {
                return NormalizeOutcome::NormalForm {
                    term: current,
                    steps,
                }
            }
            None => {
                return NormalizeOutcome::StuckNonValue {
                    term: current,
                    steps,
                }
            }
            Some(_) if steps == max_steps => {
                return NormalizeOutcome::BudgetExceeded {
                    last: current,
                    steps,
                }
            }
            Some(n) => {
                steps += 1;
                if let Some(tr) = trace.as_deref_mut() {
                    tr.push(n.clone());
                }
                current = n;
            }
        }
    }
}

/// The search visited more states than allowed, or found a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub visited: usize,
    pub cycle: bool,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycle {
            write!(f, "reduction cycle found after {} states", self.visited)
        } else {
            write!(f, "budget exceeded after {} states", self.visited)
        }
    }
}

impl std::error::Error for BudgetExceeded {}

/// Length of the longest reduction sequence from `t`, by memoized exhaustive
/// search over the reduction graph. `budget` bounds the number of distinct
/// terms expanded.
pub fn derivational_length(trs: &Trs, t: &Term, budget: usize) -> Result<u64, BudgetExceeded> {
    struct Frame {
        term: Term,
        succ: Vec<Term>,
        next: usize,
        best: u64,
    }

    let mut memo: HashMap<Term, u64> = HashMap::new();
    let mut on_stack: HashSet<Term> = HashSet::new();
    let mut visited = 0usize;
    let mut stack: Vec<Frame> = Vec::new();

    let mut push = |term: Term, stack: &mut Vec<Frame>, on_stack: &mut HashSet<Term>| {
        visited += 1;
        if visited > budget {
            return Err(BudgetExceeded {
                visited,
                cycle: false,
            });
        }
        let succ = rewrite_step(trs, &term);
        on_stack.insert(term.clone());
        stack.push(Frame {
            term,
            succ,
            next: 0,
            best: 0,
        });
        Ok(())
    };

    push(t.clone(), &mut stack, &mut on_stack)?;
    let mut result = 0;
    while let Some(frame) = stack.last_mut() {
        if frame.next < frame.succ.len() {
            let s = frame.succ[frame.next].clone();
            frame.next += 1;
            if let Some(&d) = memo.get(&s) {
                frame.best = frame.best.max(d + 1);
            } else if on_stack.contains(&s) {
                return Err(BudgetExceeded {
                    visited: memo.len() + stack.len(),
                    cycle: true,
                });
            } else {
                push(s, &mut stack, &mut on_stack)?;
            }
            continue;
        }
        let done = stack.pop().expect("non-empty stack");
        on_stack.remove(&done.term);
        memo.insert(done.term, done.best);
        match stack.last_mut() {
            Some(parent) => parent.best = parent.best.max(done.best + 1),
            None => result = done.best,
        }
    }
    Ok(result)
}

pub fn derivational_length_default(trs: &Trs, t: &Term) -> Result<u64, BudgetExceeded> {
    derivational_length(trs, t, DEFAULT_DL_BUDGET)
}
