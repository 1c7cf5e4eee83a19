//! Ground constructor and basic terms, exhaustive by size or sampled.

use rand::Rng;

use super::{Symbol, Term, Trs};

/// Terms of each exact size `0..=max_size` (index 0 is always empty).
fn values_by_size(constructors: &[&Symbol], max_size: usize) -> Vec<Vec<Term>> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut level = Vec::new();
        for c in constructors {
            for args in tuples(&by_size, c.arity, n - 1) {
                level.push(Term::App(c.name.clone(), args));
            }
        }
        by_size[n] = level;
    }
    by_size
}

/// All argument tuples of `arity` terms whose sizes sum to exactly `total`.
fn tuples(by_size: &[Vec<Term>], arity: usize, total: usize) -> Vec<Vec<Term>> {
    if arity == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(arity - 1) {
        let Some(heads) = by_size.get(first) else {
            break;
        };
        if heads.is_empty() {
            continue;
        }
        let tails = tuples(by_size, arity - 1, total - first);
        for h in heads {
            for tail in &tails {
                let mut v = Vec::with_capacity(arity);
                v.push(h.clone());
                v.extend(tail.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

/// Every ground constructor term of size at most `max_size`, ordered by size
/// and then by signature order.
pub fn constructor_terms(trs: &Trs, max_size: usize) -> Vec<Term> {
    let cons: Vec<&Symbol> = trs.constructors().collect();
    values_by_size(&cons, max_size)
        .into_iter()
        .flatten()
        .collect()
}

/// Every basic term `f(v1, ..., vn)` of size at most `max_size`, ordered by size.
pub fn basic_terms(trs: &Trs, max_size: usize) -> Vec<Term> {
    let cons: Vec<&Symbol> = trs.constructors().collect();
    let by_size = values_by_size(&cons, max_size);
    let mut out = Vec::new();
    for n in 1..=max_size {
        for f in trs.defined() {
            for args in tuples(&by_size, f.arity, n - 1) {
                out.push(Term::App(f.name.clone(), args));
            }
        }
    }
    out
}

/// Approximate term counts per size, used as sampling weights.
fn counts(constructors: &[&Symbol], max_size: usize) -> Vec<f64> {
    let mut c = vec![0.0; max_size + 1];
    for n in 1..=max_size {
        c[n] = constructors
            .iter()
            .map(|s| tuple_count(&c, s.arity, n - 1))
            .sum();
    }
    c
}

fn tuple_count(c: &[f64], arity: usize, total: usize) -> f64 {
    if arity == 0 {
        return if total == 0 { 1.0 } else { 0.0 };
    }
    (1..=total.saturating_sub(arity - 1))
        .map(|first| {
            c.get(first).copied().unwrap_or(0.0) * tuple_count(c, arity - 1, total - first)
        })
        .sum()
}

fn pick_weighted<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    let mut r = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if r < *w {
            return Some(i);
        }
        r -= w;
    }
    weights.iter().rposition(|w| *w > 0.0)
}

fn sample_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    cons: &[&Symbol],
    c: &[f64],
    arity: usize,
    total: usize,
) -> Option<Vec<Term>> {
    let mut out = Vec::with_capacity(arity);
    let mut left = total;
    for k in (0..arity).rev() {
        // k arguments remain after this one.
        let max_first = left.checked_sub(k)?;
        let weights: Vec<f64> = (0..=max_first)
            .map(|s| {
                if s == 0 {
                    0.0
                } else {
                    c[s] * tuple_count(c, k, left - s)
                }
            })
            .collect();
        let s = pick_weighted(rng, &weights)?;
        out.push(sample_value(rng, cons, c, s)?);
        left -= s;
    }
    (left == 0).then_some(out)
}

fn sample_value<R: Rng + ?Sized>(
    rng: &mut R,
    cons: &[&Symbol],
    c: &[f64],
    size: usize,
) -> Option<Term> {
    let weights: Vec<f64> = cons
        .iter()
        .map(|s| tuple_count(c, s.arity, size - 1))
        .collect();
    let i = pick_weighted(rng, &weights)?;
    let args = sample_tuple(rng, cons, c, cons[i].arity, size - 1)?;
    Some(Term::App(cons[i].name.clone(), args))
}

/// A random ground constructor term of exactly `size`, close to uniform over
/// terms of that size. `None` if there is none.
pub fn random_constructor_term<R: Rng + ?Sized>(
    trs: &Trs,
    size: usize,
    rng: &mut R,
) -> Option<Term> {
    if size == 0 {
        return None;
    }
    let cons: Vec<&Symbol> = trs.constructors().collect();
    let c = counts(&cons, size);
    sample_value(rng, &cons, &c, size)
}

/// A random basic term of exactly `size`. `None` if there is none.
pub fn random_basic_term<R: Rng + ?Sized>(trs: &Trs, size: usize, rng: &mut R) -> Option<Term> {
    if size == 0 {
        return None;
    }
    let cons: Vec<&Symbol> = trs.constructors().collect();
    let defs: Vec<&Symbol> = trs.defined().collect();
    let c = counts(&cons, size);
    let weights: Vec<f64> = defs
        .iter()
        .map(|f| tuple_count(&c, f.arity, size - 1))
        .collect();
    let i = pick_weighted(rng, &weights)?;
    let args = sample_tuple(rng, &cons, &c, defs[i].arity, size - 1)?;
    Some(Term::App(defs[i].name.clone(), args))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn naturals_up_to_four() {
        let trs = parse_trs("d(0) -> 0\nd(s(x)) -> s(s(d(x)))").unwrap();
        let vs: Vec<String> = constructor_terms(&trs, 4)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(vs, vec!["0", "s(0)", "s(s(0))", "s(s(s(0)))"]);
        let bs: Vec<String> = basic_terms(&trs, 3).iter().map(|t| t.to_string()).collect();
        assert_eq!(bs, vec!["d(0)", "d(s(0))"]);
    }

    #[test]
    fn binary_tree_counts_are_catalan() {
        let trs = parse_trs("f(x) -> c(x, x)\ng(0) -> 0").unwrap();
        let vs = constructor_terms(&trs, 7);
        // sizes 1, 3, 5, 7 hold 1, 1, 2, 5 trees
        assert_eq!(vs.len(), 9);
        assert!(vs.iter().all(|v| trs.is_value(v)));
    }

    #[test]
    fn random_terms_have_requested_size() {
        let trs = parse_trs("f(x, y) -> c(x, y)\ng(s(x)) -> x\ng(0) -> 0").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..12 {
            let v = random_constructor_term(&trs, n, &mut rng).unwrap();
            assert_eq!(v.size(), n);
            assert!(trs.is_value(&v));
            if n >= 2 {
                let b = random_basic_term(&trs, n, &mut rng).unwrap();
                assert_eq!(b.size(), n);
                assert!(trs.is_basic(&b));
            }
        }
        assert!(random_basic_term(&trs, 1, &mut rng).is_none());
    }
}
