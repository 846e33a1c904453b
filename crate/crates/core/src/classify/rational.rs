use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduced fraction of arbitrary-precision integers with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Validation("zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn integer(n: i64) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Self(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, k: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, k))
    }
}

impl std::ops::Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl std::ops::Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl std::ops::Div for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 / &rhs.0)
    }
}

impl std::ops::Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `"p/q"`, integers and finite decimals such as `"0.125"`.
impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Validation(format!("not an exact rational: {s:?}"));
        let int = |t: &str| -> Result<BigInt> {
            if t.is_empty() || !t.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            BigInt::from_str(t).map_err(|_| bad())
        };
        if let Some((n, d)) = s.split_once('/') {
            return Self::new(int(n.trim())?, int(d.trim())?);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let whole = if whole.is_empty() || whole == "-" || whole == "+" { BigInt::zero() } else { int(whole)? };
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
            let magnitude = whole.abs() * &scale + frac_part;
            let numer = if negative { -magnitude } else { magnitude };
            return Self::new(numer, scale);
        }
        Ok(Self(BigRational::from_integer(int(s)?)))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!("1/3".parse::<ExactRational>().unwrap(), ExactRational::new(1, 3).unwrap());
        assert_eq!("2/4".parse::<ExactRational>().unwrap().to_string(), "1/2");
        assert_eq!("-3".parse::<ExactRational>().unwrap(), ExactRational::integer(-3));
        assert_eq!("0.125".parse::<ExactRational>().unwrap().to_string(), "1/8");
        assert_eq!("-1.5".parse::<ExactRational>().unwrap().to_string(), "-3/2");
        assert_eq!("3/-6".parse::<ExactRational>().unwrap().to_string(), "-1/2");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1/2/3", "0.", "1e5", "--1"] {
            assert!(s.parse::<ExactRational>().is_err(), "{s}");
        }
    }
}
