//! For qubits the entropy is a function of the purity alone, so the entropy
//! level sets are purity level sets and hence algebraic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::sampling::random_unitary;
use crate::spectral::{purity, DensityState, HermitianMatrix};

pub fn binary_entropy(lambda: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(lambda) + h(1.0 - lambda)
}

/// The eigenvalue `λ ∈ (0, 1/2]` with binary entropy `c`.
pub fn binary_entropy_inverse(c: f64) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    if !(c > 0.0 && c <= ln2) {
        return Err(Error::Validation(format!("qubit entropy level {c} outside (0, ln 2]")));
    }
    if (c - ln2).abs() < 1e-15 {
        return Ok(0.5);
    }
    bisect(|l| binary_entropy(l) - c, 0.0, 0.5, 0.0)
        .ok_or_else(|| Error::InternalConsistency(format!("no qubit eigenvalue at level {c}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub level: f64,
    pub lambda: f64,
    pub expected_purity: f64,
    pub samples: usize,
    pub max_deviation: f64,
}

/// Samples `n` qubit states of entropy `c` (random unitary orbits of
/// `diag(λ, 1 − λ)`) and reports the largest deviation of `tr ρ²` from
/// `λ² + (1 − λ)²`.
pub fn d2_witness(c: f64, n_samples: usize, seed: u64) -> Result<WitnessReport> {
    let lambda = binary_entropy_inverse(c)?;
    let expected_purity = lambda * lambda + (1.0 - lambda) * (1.0 - lambda);
    let base = HermitianMatrix::diagonal(&[lambda, 1.0 - lambda]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..n_samples {
        let u = random_unitary(2, &mut rng);
        let rho = DensityState::new(base.conjugated_by(&u))?;
        max_deviation = max_deviation.max((purity(&rho) - expected_purity).abs());
    }
    Ok(WitnessReport { level: c, lambda, expected_purity, samples: n_samples, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_mixing() {
        let r = d2_witness(std::f64::consts::LN_2, 10, 0).unwrap();
        assert_eq!(r.lambda, 0.5);
        assert_eq!(r.expected_purity, 0.5);
        assert!(r.max_deviation <= 1e-12);
    }

    #[test]
    fn eigenvalue_solves_entropy_equation() {
        let l = binary_entropy_inverse(0.5).unwrap();
        assert!((binary_entropy(l) - 0.5).abs() < 1e-14);
        assert!(l > 0.0 && l < 0.5);
    }

    #[test]
    fn hundred_samples_at_half() {
        assert!(d2_witness(0.5, 100, 42).unwrap().max_deviation <= 1e-10);
    }

    #[test]
    fn purity_strictly_decreasing_in_level() {
        let ln2 = std::f64::consts::LN_2;
        let purities: Vec<f64> = (1..=50)
            .map(|k| d2_witness(ln2 * k as f64 / 51.0, 0, 0).unwrap().expected_purity)
            .collect();
        assert!(purities.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn level_out_of_range() {
        assert!(d2_witness(0.0, 1, 0).is_err());
        assert!(d2_witness(0.8, 1, 0).is_err());
    }
}
