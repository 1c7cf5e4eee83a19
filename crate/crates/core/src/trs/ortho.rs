use serde::Serialize;

use super::rewrite::Substitution;
use super::{Position, Term, Trs};

/// Most general unifier of `s` and `t`, fully resolved.
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    let mut work = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = work.pop() {
        let a = a.substitute(&sigma);
        let b = b.substitute(&sigma);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.vars().contains(&x) {
                    return None;
                }
                let single: Substitution = [(x.clone(), other.clone())].into_iter().collect();
                for v in sigma.values_mut() {
                    *v = v.substitute(&single);
                }
                sigma.insert(x, other);
            }
            (Term::App(f, fs), Term::App(g, gs)) => {
                if f != g || fs.len() != gs.len() {
                    return None;
                }
                work.extend(fs.into_iter().zip(gs));
            }
        }
    }
    Some(sigma)
}

/// Rule `inner` (renamed apart) unifies with the subterm of rule `outer`'s
/// left-hand side at `position`. Rule numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub outer: usize,
    pub inner: usize,
    pub position: Position,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub left_linear: bool,
    /// 1-based numbers of rules with a repeated left-hand side variable.
    pub non_linear_rules: Vec<usize>,
    pub overlaps: Vec<Overlap>,
}

impl OrthogonalityReport {
    pub fn is_orthogonal(&self) -> bool {
        self.left_linear && self.overlaps.is_empty()
    }
}

/// Root overlaps between two different rules are symmetric and are listed
/// once, with `outer < inner`.
pub fn check_orthogonality(trs: &Trs) -> OrthogonalityReport {
    let rules = trs.rules();
    let non_linear_rules: Vec<usize> = rules
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lhs.var_occurrences().len() != r.lhs.vars().len())
        .map(|(i, _)| i + 1)
        .collect();

    let mut overlaps = Vec::new();
    for (i, outer) in rules.iter().enumerate() {
        for (pos, sub) in outer.lhs.subterms() {
            if sub.is_var() {
                continue;
            }
            for (j, inner) in rules.iter().enumerate() {
                if pos.is_root() && j <= i {
                    continue;
                }
                let renamed = inner.lhs.rename_vars("'");
                if unify(sub, &renamed).is_some() {
                    overlaps.push(Overlap {
                        outer: i + 1,
                        inner: j + 1,
                        position: pos.clone(),
                    });
                }
            }
        }
    }

    OrthogonalityReport {
        left_linear: non_linear_rules.is_empty(),
        non_linear_rules,
        overlaps,
    }
}
