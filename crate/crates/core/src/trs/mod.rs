//! First-order terms, constructor rewrite systems and their operational semantics.

mod enumerate;
mod ortho;
mod parse;
mod rewrite;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub use enumerate::{basic_terms, constructor_terms, random_basic_term, random_constructor_term};
pub use ortho::{check_orthogonality, unify, OrthogonalityReport, Overlap};
pub use parse::{parse_term, parse_trs};
pub use rewrite::{
    derivational_length, derivational_length_default, match_pattern, normalize, normalize_traced,
    rewrite_step, BudgetExceeded, NormalizeOutcome, Substitution, DEFAULT_DL_BUDGET,
    DEFAULT_NORMALIZE_STEPS,
};

pub type Name = Arc<str>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Constructor,
    Defined,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Symbol {
    #[serde(serialize_with = "serialize_name")]
    pub name: Name,
    pub arity: usize,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn is_constructor(&self) -> bool {
        self.kind == SymbolKind::Constructor
    }

    pub fn is_defined(&self) -> bool {
        self.kind == SymbolKind::Defined
    }
}

fn serialize_name<S: serde::Serializer>(name: &Name, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(name)
}

/// A path from the root: 1-based argument indices. The empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Position {
        let mut p = self.0.clone();
        p.push(index);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(name), args)
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Arc::from(name), Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<&Name> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence, without repetition.
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Every variable occurrence, with repetition.
    pub fn var_occurrences(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Term::Var(x) = t {
                out.push(x.clone());
            }
        });
        out
    }

    fn walk<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        for a in self.args() {
            a.walk(f);
        }
    }

    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::App(f, _) = t {
                out.insert(f.clone());
            }
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn at(&self, pos: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in &pos.0 {
            t = t.args().get(i.checked_sub(1)?)?;
        }
        Some(t)
    }

    pub fn replace_at(&self, pos: &[usize], replacement: Term) -> Term {
        match pos.split_first() {
            None => replacement,
            Some((&i, rest)) => match self {
                Term::Var(_) => panic!("position below a variable"),
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i - 1] = args[i - 1].replace_at(rest, replacement);
                    Term::App(f.clone(), args)
                }
            },
        }
    }

    /// All positions in pre-order (outermost first, then left to right).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.collect_positions(Position::root(), &mut out);
        out
    }

    fn collect_positions(&self, here: Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        for (i, a) in self.args().iter().enumerate() {
            a.collect_positions(here.child(i + 1), out);
        }
    }

    /// Subterms with their positions, pre-order.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        self.positions()
            .into_iter()
            .map(|p| {
                let t = self.at(&p).expect("position from positions()");
                (p, t)
            })
            .collect()
    }

    pub fn is_proper_subterm_of(&self, other: &Term) -> bool {
        other
            .args()
            .iter()
            .any(|a| a == self || self.is_proper_subterm_of(a))
    }

    pub fn substitute(&self, sigma: &HashMap<Name, Term>) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute(sigma)).collect(),
            ),
        }
    }

    pub fn rename_vars(&self, suffix: &str) -> Term {
        match self {
            Term::Var(x) => Term::Var(Arc::from(format!("{x}{suffix}"))),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.rename_vars(suffix)).collect(),
            ),
        }
    }

    /// Display with the root symbol marked (`f#(...)`).
    pub fn marked(&self) -> String {
        match self {
            Term::Var(x) => x.to_string(),
            Term::App(f, args) if args.is_empty() => format!("{f}#"),
            Term::App(f, args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                format!("{f}#({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Rule {
        Rule { lhs, rhs }
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A constructor term rewriting system. Symbol kinds are inferred: a symbol is
/// defined iff it is the root of some left-hand side.
#[derive(Clone, Debug)]
pub struct Trs {
    signature: Vec<Symbol>,
    rules: Vec<Rule>,
    index: HashMap<Name, usize>,
}

impl Trs {
    /// Builds a system from rules, inferring the signature in order of first
    /// occurrence. `extra` lists symbols that must be present even if unused
    /// (for instance constructors only mentioned in a header).
    pub fn from_rules(rules: Vec<Rule>) -> Result<Trs> {
        Self::with_symbols(rules, &[])
    }

    pub fn with_symbols(rules: Vec<Rule>, extra: &[(Name, usize)]) -> Result<Trs> {
        let mut arities: Vec<(Name, usize)> = Vec::new();
        let mut seen: HashMap<Name, usize> = HashMap::new();
        let mut note = |name: &Name, arity: usize| -> Result<()> {
            match seen.get(name) {
                Some(&a) if a != arity => Err(Error::ArityConflict {
                    name: name.to_string(),
                    first: a,
                    second: arity,
                }),
                Some(_) => Ok(()),
                None => {
                    seen.insert(name.clone(), arity);
                    arities.push((name.clone(), arity));
                    Ok(())
                }
            }
        };
        fn visit(t: &Term, note: &mut dyn FnMut(&Name, usize) -> Result<()>) -> Result<()> {
            if let Term::App(f, args) = t {
                note(f, args.len())?;
                for a in args {
                    visit(a, note)?;
                }
            }
            Ok(())
        }
        for rule in &rules {
            visit(&rule.lhs, &mut note)?;
            visit(&rule.rhs, &mut note)?;
        }
        for (name, arity) in extra {
            note(name, *arity)?;
        }

        let defined: BTreeSet<Name> = rules.iter().filter_map(|r| r.lhs.root().cloned()).collect();
        let signature: Vec<Symbol> = arities
            .into_iter()
            .map(|(name, arity)| {
                let kind = if defined.contains(&name) {
                    SymbolKind::Defined
                } else {
                    SymbolKind::Constructor
                };
                Symbol { name, arity, kind }
            })
            .collect();
        let index = signature
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), i))
            .collect();
        let trs = Trs {
            signature,
            rules,
            index,
        };
        trs.validate()?;
        Ok(trs)
    }

    fn validate(&self) -> Result<()> {
        for (i, rule) in self.rules.iter().enumerate() {
            let n = i + 1;
            let args = match &rule.lhs {
                Term::Var(_) => return Err(Error::VariableLhs { rule: n }),
                Term::App(_, args) => args,
            };
            for arg in args {
                if !self.is_pattern(arg) {
                    return Err(Error::NonPatternLhs {
                        rule: n,
                        arg: arg.to_string(),
                    });
                }
            }
            let lhs_vars = rule.lhs.vars();
            if let Some(x) = rule.rhs.vars().into_iter().find(|x| !lhs_vars.contains(x)) {
                return Err(Error::UnboundVariable {
                    rule: n,
                    var: x.to_string(),
                });
            }
        }
        Ok(())
    }

    /// A constructor term possibly containing variables.
    pub fn is_pattern(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(f, args) => self.is_constructor(f) && args.iter().all(|a| self.is_pattern(a)),
        }
    }

    /// A ground constructor term.
    pub fn is_value(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(f, args) => self.is_constructor(f) && args.iter().all(|a| self.is_value(a)),
        }
    }

    /// `f(v1, ..., vn)` with `f` defined and every `vi` a value.
    pub fn is_basic(&self, t: &Term) -> bool {
        match t {
            Term::App(f, args) => self.is_defined(f) && args.iter().all(|a| self.is_value(a)),
            Term::Var(_) => false,
        }
    }

    pub fn signature(&self) -> &[Symbol] {
        &self.signature
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.index.get(name).map(|&i| &self.signature[i])
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.symbol(name).is_some_and(Symbol::is_defined)
    }

    pub fn is_constructor(&self, name: &str) -> bool {
        self.symbol(name).is_some_and(Symbol::is_constructor)
    }

    pub fn constructors(&self) -> impl Iterator<Item = &Symbol> {
        self.signature.iter().filter(|s| s.is_constructor())
    }

    pub fn defined(&self) -> impl Iterator<Item = &Symbol> {
        self.signature.iter().filter(|s| s.is_defined())
    }

    /// Σ over rules of |l| + |r|.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Rule::size).sum()
    }
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
