use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::factor::factor;
use super::rational::ExactRational;
use crate::error::{Error, Result};

/// `ln q = Σ_p e_p ln p` with exact rational exponents.
///
/// Prime logarithms are linearly independent over ℚ (unique factorization),
/// so two such vectors are ℚ-linearly dependent exactly when they are parallel.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeExponentVector {
    exponents: BTreeMap<u64, ExactRational>,
}

impl PrimeExponentVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn get(&self, p: u64) -> Option<&ExactRational> {
        self.exponents.get(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactRational)> {
        self.exponents.iter().map(|(&p, e)| (p, e))
    }

    /// Adds `e · ln p`, dropping the entry if it cancels.
    pub fn add_term(&mut self, p: u64, e: &ExactRational) {
        if e.is_zero() {
            return;
        }
        let sum = match self.exponents.get(&p) {
            Some(old) => old + e,
            None => e.clone(),
        };
        if sum.is_zero() {
            self.exponents.remove(&p);
        } else {
            self.exponents.insert(p, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.add_term(p, e);
        }
        out
    }

    pub fn scale(&self, s: &ExactRational) -> Self {
        let mut out = Self::new();
        for (p, e) in self.iter() {
            out.add_term(p, &(e * s));
        }
        out
    }

    /// The rational `r` with `self = r · other`, if one exists. `other` must be non-empty.
    pub fn ratio_to(&self, other: &Self) -> Option<ExactRational> {
        let (p, ep) = other.iter().next()?;
        let r = match self.get(p) {
            Some(e) => e / ep,
            None => ExactRational::zero(),
        };
        if other.scale(&r) == *self {
            Some(r)
        } else {
            None
        }
    }

    /// Floating-point value `Σ e_p ln p`.
    pub fn ln_value(&self) -> f64 {
        self.iter().map(|(p, e)| e.to_f64() * (p as f64).ln()).sum()
    }
}

impl Serialize for PrimeExponentVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.exponents.len()))?;
        for (p, e) in &self.exponents {
            map.serialize_entry(&p.to_string(), e)?;
        }
        map.end()
    }
}

fn factor_component(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let v = n.to_u64().ok_or_else(|| {
        Error::Unsupported(format!("component {n} exceeds the 64-bit factorization limit"))
    })?;
    Ok(factor(v))
}

/// Exponent vector of `ln q` for `q > 0`.
pub fn prime_log_vector(q: &ExactRational) -> Result<PrimeExponentVector> {
    if !q.is_positive() {
        return Err(Error::Validation(format!("logarithm of non-positive rational {q}")));
    }
    let mut v = PrimeExponentVector::new();
    for (p, e) in factor_component(q.numer())? {
        v.add_term(p, &ExactRational::integer(e as i64));
    }
    for (p, e) in factor_component(q.denom())? {
        v.add_term(p, &ExactRational::integer(-(e as i64)));
    }
    Ok(v)
}

/// Checks a spectrum is non-negative and sums exactly to one.
pub fn validate_spectrum(spectrum: &[ExactRational]) -> Result<()> {
    if spectrum.is_empty() {
        return Err(Error::Validation("empty spectrum".into()));
    }
    if let Some(neg) = spectrum.iter().find(|l| l.is_negative()) {
        return Err(Error::Validation(format!("negative eigenvalue {neg}")));
    }
    let total = spectrum.iter().fold(ExactRational::zero(), |acc, l| &acc + l);
    if total != ExactRational::one() {
        return Err(Error::Validation(format!("eigenvalues sum to {total}, not 1")));
    }
    Ok(())
}

/// `ln a` for `a = ∏ λ_i^{−λ_i}` over the non-zero eigenvalues.
pub fn entropy_log_vector(spectrum: &[ExactRational]) -> Result<PrimeExponentVector> {
    validate_spectrum(spectrum)?;
    let mut acc = PrimeExponentVector::new();
    for lambda in spectrum.iter().filter(|l| !l.is_zero()) {
        acc = acc.add(&prime_log_vector(lambda)?.scale(&-lambda));
    }
    Ok(acc)
}
