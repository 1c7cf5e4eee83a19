//! Exact nonnegative rationals.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// A nonnegative rational number. All verification arithmetic goes through
/// this type; there is no floating point on certifying paths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: u64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn ratio(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn from_rational(value: BigRational) -> Option<Self> {
        if value.is_negative() {
            None
        } else {
            Some(Scalar(value))
        }
    }

    pub fn from_bigint(value: BigInt) -> Option<Self> {
        Self::from_rational(BigRational::from_integer(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Scalar(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Smallest integer not below this value.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `self - other` when the result stays nonnegative.
    pub fn checked_sub(&self, other: &Scalar) -> Option<Scalar> {
        Scalar::from_rational(&self.0 - &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `7`, `3/4` and decimal notation such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidValue(format!("`{s}` is not a nonnegative rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Scalar::from_rational(BigRational::new(n, d)).ok_or_else(bad);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: BigInt = if int.is_empty() {
                BigInt::zero()
            } else {
                int.parse().map_err(|_| bad())?
            };
            if int.is_negative() || s.starts_with('-') {
                return Err(bad());
            }
            let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let value = BigRational::new(int * &scale + frac_val, scale);
            return Ok(Scalar(value));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Scalar::from_bigint(n).ok_or_else(bad)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 + &rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar(&self.0 * &rhs.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl From<u64> for Scalar {
    fn from(n: u64) -> Self {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_fraction_and_decimal() {
        assert_eq!("3".parse::<Scalar>().unwrap(), Scalar::from_int(3));
        assert_eq!("2/4".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("0.25".parse::<Scalar>().unwrap(), Scalar::ratio(1, 4));
        assert_eq!("1.0".parse::<Scalar>().unwrap(), Scalar::one());
        assert!("-1".parse::<Scalar>().is_err());
        assert!("-1/2".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Scalar::ratio(6, 4).to_string(), "3/2");
        assert_eq!(Scalar::ratio(4, 2).to_string(), "2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn checked_sub_refuses_negative() {
        assert_eq!(
            Scalar::from_int(3).checked_sub(&Scalar::one()),
            Some(Scalar::from_int(2))
        );
        assert_eq!(Scalar::one().checked_sub(&Scalar::from_int(3)), None);
    }
}
