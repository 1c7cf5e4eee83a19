use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Scalar;

/// Exponent vector, one entry per argument.
pub type Exponents = Vec<u32>;

/// A polynomial with nonnegative rational coefficients in `X1..Xn`.
/// Zero coefficients are never stored; the empty map is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero(arity: usize) -> Poly {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Scalar) -> Poly {
        Poly::monomial(arity, vec![0; arity], c)
    }

    /// `X{i+1}`; `i` is 0-based.
    pub fn var(arity: usize, i: usize) -> Poly {
        assert!(i < arity, "variable index out of range");
        let mut e = vec![0; arity];
        e[i] = 1;
        Poly::monomial(arity, e, Scalar::one())
    }

    pub fn monomial(arity: usize, exps: Exponents, c: Scalar) -> Poly {
        assert_eq!(exps.len(), arity, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { arity, terms }
    }

    /// `X1 + ... + Xn + k`.
    pub fn sum_plus(arity: usize, k: Scalar) -> Poly {
        let mut p = Poly::constant(arity, k);
        for i in 0..arity {
            p = p.add(&Poly::var(arity, i));
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Poly {
        let mut p = Poly::zero(arity);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Scalar) {
        assert_eq!(e.len(), self.arity, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.arity])
    }

    /// Coefficient of `X{i+1}` alone.
    pub fn linear_coeff(&self, i: usize) -> Scalar {
        let mut e = vec![0; self.arity];
        e[i] = 1;
        self.coeff(&e)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    /// Variables (0-based) that occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = Poly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.arity, Scalar::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at `point`; panics on a length mismatch.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.arity, "point length");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, &k) in point.iter().zip(e) {
                    if k > 0 {
                        v = &v * &x.pow(k);
                    }
                }
                v
            })
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.to_f64(), |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    /// Substitutes `args[i]` for `X{i+1}`. All `args` share one arity, which
    /// becomes the arity of the result.
    pub fn compose(&self, args: &[Poly], arity: usize) -> Poly {
        assert_eq!(args.len(), self.arity, "argument count");
        let mut out = Poly::zero(arity);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(arity, c.clone());
            for (arg, &k) in args.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&arg.pow(k));
                }
            }
            out = out.add(&m);
        }
        out
    }

    /// `self - other` coefficientwise, with signs.
    pub fn difference(&self, other: &Poly) -> BTreeMap<Exponents, BigRational> {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out: BTreeMap<Exponents, BigRational> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.as_rational().clone()))
            .collect();
        for (e, c) in &other.terms {
            let slot = out.entry(e.clone()).or_insert_with(BigRational::zero);
            *slot -= c.as_rational();
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Every coefficient of `self` is at least the matching one of `other`.
    pub fn dominates(&self, other: &Poly) -> bool {
        other
            .terms
            .iter()
            .all(|(e, c)| self.terms.get(e).is_some_and(|d| d >= c))
    }

    /// Monomials in display order: higher degree first, then `X1` before `X2`.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], c: &Scalar) -> fmt::Result {
    let vars: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("X{}", i + 1)
            } else {
                format!("X{}^{}", i + 1, k)
            }
        })
        .collect();
    match (vars.is_empty(), c.is_one()) {
        (true, _) => write!(f, "{c}"),
        (false, true) => write!(f, "{}", vars.join("*")),
        (false, false) => write!(f, "{c}*{}", vars.join("*")),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            fmt_monomial(f, e, c)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    fn c(n: u64) -> Poly {
        Poly::constant(2, Scalar::from_int(n))
    }

    #[test]
    fn arithmetic_and_display() {
        let p = x(0).add(&c(1)).mul(&x(1).add(&c(2)));
        assert_eq!(p.to_string(), "X1*X2 + 2*X1 + X2 + 2");
        assert_eq!(p.degree(), 2);
        assert_eq!(x(0).pow(3).to_string(), "X1^3");
        assert_eq!(Poly::zero(1).to_string(), "0");
        assert_eq!(Poly::zero(1).degree(), 0);
    }

    #[test]
    fn evaluation() {
        let p = x(0).scale(&Scalar::from_int(3)).add(&c(1));
        assert_eq!(
            p.eval(&[Scalar::from_int(2), Scalar::zero()]),
            Scalar::from_int(7)
        );
    }

    #[test]
    fn composition() {
        // 2X with X := X + 3
        let f = Poly::var(1, 0).scale(&Scalar::from_int(2));
        let g = Poly::var(1, 0).add(&Poly::constant(1, Scalar::from_int(3)));
        assert_eq!(f.compose(&[g], 1).to_string(), "2*X1 + 6");
    }

    #[test]
    fn signed_difference() {
        let p = x(0).scale(&Scalar::from_int(3)).add(&c(4));
        let r = x(0).add(&c(3));
        let d = p.difference(&r);
        assert!(d.values().all(|v| v > &BigRational::zero()));
        assert!(p.dominates(&r));
        assert!(!r.dominates(&p));
        assert!(p.difference(&p).is_empty());
    }
}
