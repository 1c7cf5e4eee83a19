//! Dependency pairs. Both sides are stored unmarked; the mark lives on the root
//! and is applied when displaying.

use std::fmt;

use serde::Serialize;

use crate::trs::{Position, Term, Trs};

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct DependencyPair {
    #[serde(serialize_with = "ser_marked")]
    pub lhs: Term,
    #[serde(serialize_with = "ser_marked")]
    pub rhs: Term,
    /// 1-based number of the rule the pair comes from.
    pub origin: usize,
    /// Position of `rhs` inside that rule's right-hand side.
    #[serde(serialize_with = "ser_display")]
    pub position: Position,
}

fn ser_marked<S: serde::Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.marked())
}

fn ser_display<S: serde::Serializer>(p: &Position, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl fmt::Display for DependencyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs.marked(), self.rhs.marked())
    }
}

impl fmt::Debug for DependencyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [rule {}, at {}]", self.origin, self.position)
    }
}

/// One pair per defined-rooted subterm `u` of a right-hand side, unless `u` is
/// a proper subterm of the left-hand side. Ordered by rule, then position;
/// repeats of the same subterm within one rule keep the first position.
pub fn dependency_pairs(trs: &Trs) -> Vec<DependencyPair> {
    let mut out: Vec<DependencyPair> = Vec::new();
    for (i, rule) in trs.rules().iter().enumerate() {
        let start = out.len();
        for (pos, u) in rule.rhs.subterms() {
            let Some(f) = u.root() else { continue };
            if !trs.is_defined(f) || u.is_proper_subterm_of(&rule.lhs) {
                continue;
            }
            if out[start..].iter().any(|p| &p.rhs == u) {
                continue;
            }
            out.push(DependencyPair {
                lhs: rule.lhs.clone(),
                rhs: u.clone(),
                origin: i + 1,
                position: pos,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;

    fn shown(trs: &str) -> Vec<String> {
        dependency_pairs(&parse_trs(trs).unwrap())
            .iter()
            .map(|p| p.to_string())
            .collect()
    }

    #[test]
    fn halflog_pairs() {
        let got = shown(
            "half(0) -> 0\nhalf(s(0)) -> 0\nhalf(s(s(x))) -> s(half(x))\n\
             log(s(s(x))) -> s(log(half(s(s(x)))))\nlog(s(0)) -> 0",
        );
        assert_eq!(
            got,
            vec![
                "half#(s(s(x))) -> half#(x)",
                "log#(s(s(x))) -> log#(half(s(s(x))))",
                "log#(s(s(x))) -> half#(s(s(x)))",
            ]
        );
    }

    #[test]
    fn constructor_rhs_has_no_pairs() {
        assert!(shown("f(s(x)) -> x\nf(0) -> s(0)").is_empty());
    }

    #[test]
    fn self_pair_is_kept() {
        assert_eq!(
            shown("f(x) -> f(f(x))"),
            vec!["f#(x) -> f#(f(x))", "f#(x) -> f#(x)"]
        );
    }

    #[test]
    fn repeated_subterm_in_one_rule_is_listed_once() {
        assert_eq!(
            shown("f(x, y) -> c(g(x), g(x))\ng(x) -> x"),
            vec!["f#(x, y) -> g#(x)"]
        );
    }

    #[test]
    fn positions_are_recorded() {
        let trs = parse_trs("f(s(x)) -> s(f(x))\nf(0) -> 0").unwrap();
        let dps = dependency_pairs(&trs);
        assert_eq!(dps[0].position.to_string(), "1");
        assert_eq!(dps[0].origin, 1);
    }
}
