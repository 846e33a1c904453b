//! Exact zero / rational / transcendental classification of the entropy of a
//! state with rational spectrum.
//!
//! With `a = ∏ λ_i^{−λ_i}` the entropy in base `b` is `ln a / ln b`. For
//! rational eigenvalues and a rational base both logarithms are rational
//! combinations of prime logarithms, so the quotient is rational exactly when
//! the two exponent vectors are parallel. Otherwise the quotient is
//! irrational, and by Baker's theorem on linear forms in logarithms it is in
//! fact transcendental; only the irrationality part is certified here.

mod factor;
mod primevec;
mod rational;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use factor::{factor, is_prime};
pub use primevec::{entropy_log_vector, prime_log_vector, validate_spectrum, PrimeExponentVector};
pub use rational::ExactRational;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Rational(ExactRational),
}

impl LogBase {
    pub fn to_f64(&self) -> f64 {
        match self {
            LogBase::Natural => std::f64::consts::E,
            LogBase::Rational(b) => b.to_f64(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => f.write_str("e"),
            LogBase::Rational(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "E" => Ok(LogBase::Natural),
            other => match other.parse::<ExactRational>() {
                Ok(b) => Ok(LogBase::Rational(b)),
                Err(_) => Err(Error::Unsupported(format!(
                    "base {other:?} is neither 'e' nor an exact rational; irrational algebraic bases are not supported"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    Rational(ExactRational),
    Transcendental,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Zero => "zero",
            Verdict::Rational(_) => "rational",
            Verdict::Transcendental => "transcendental",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    /// Floating-point entropy for cross-validation.
    pub numeric_check: f64,
    pub ln_a: PrimeExponentVector,
    pub ln_b: Option<PrimeExponentVector>,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<&'a ExactRational>,
    ln_a_vector: &'a PrimeExponentVector,
    ln_b_vector: Option<&'a PrimeExponentVector>,
    float_entropy: f64,
    certification: &'static str,
}

impl ClassificationResult {
    pub fn report(&self) -> serde_json::Value {
        let (value, certification) = match &self.verdict {
            Verdict::Zero => (None, "exact"),
            Verdict::Rational(r) => (Some(r), "exact"),
            Verdict::Transcendental => (
                None,
                "irrationality exact (non-parallel prime exponent vectors); transcendence by Baker's theorem",
            ),
        };
        let report = Report {
            schema: "1",
            verdict: self.verdict.label(),
            value,
            ln_a_vector: &self.ln_a,
            ln_b_vector: self.ln_b.as_ref(),
            float_entropy: self.numeric_check,
            certification,
        };
        serde_json::to_value(report).expect("report serializes")
    }
}

fn float_entropy(spectrum: &[ExactRational], base: &LogBase) -> f64 {
    let nats: f64 = spectrum
        .iter()
        .map(ExactRational::to_f64)
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum();
    nats / base.to_f64().ln()
}

/// Decides whether `S(ρ) = −Σ λ_i log_b λ_i` is zero, rational or transcendental.
pub fn classify(spectrum: &[ExactRational], base: &LogBase) -> Result<ClassificationResult> {
    if let LogBase::Rational(b) = base {
        if *b <= ExactRational::one() {
            return Err(Error::Validation(format!("logarithm base must exceed 1, got {b}")));
        }
    }
    let ln_a = entropy_log_vector(spectrum)?;
    let ln_b = match base {
        LogBase::Natural => None,
        LogBase::Rational(b) => Some(prime_log_vector(b)?),
    };
    let verdict = if ln_a.is_empty() {
        Verdict::Zero
    } else {
        match &ln_b {
            None => Verdict::Transcendental,
            Some(vb) => match ln_a.ratio_to(vb) {
                Some(r) => Verdict::Rational(r),
                None => Verdict::Transcendental,
            },
        }
    };
    Ok(ClassificationResult { verdict, numeric_check: float_entropy(spectrum, base), ln_a, ln_b })
}
