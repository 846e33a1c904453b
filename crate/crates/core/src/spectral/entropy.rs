use super::matrix::{DensityState, HermitianMatrix};
use super::ZERO_EIGENVALUE_CUTOFF;
use crate::error::{Error, Result};

/// Eigenvalues of `σ` above this are treated as spanning its range.
const SUPPORT_CUTOFF: f64 = 1e-12;
const SUPPORT_OVERLAP_TOLERANCE: f64 = 1e-10;

/// `−Σ λ ln λ` over eigenvalues above the zero cutoff.
pub fn spectral_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > ZERO_EIGENVALUE_CUTOFF)
        .map(|&l| -l * l.ln())
        .sum()
}

/// `S(ρ) = −tr(ρ log_b ρ)`.
pub fn von_neumann_entropy(rho: &DensityState, base: f64) -> Result<f64> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::Validation(format!("logarithm base must exceed 1, got {base}")));
    }
    Ok(spectral_entropy(&rho.spectrum().eigenvalues) / base.ln())
}

/// Principal matrix logarithm of a positive definite state.
pub fn matrix_log(rho: &DensityState) -> Result<HermitianMatrix> {
    rho.require_positive_definite("matrix logarithm")?;
    Ok(rho.spectrum().map(f64::ln))
}

/// `∇S(ρ) = −𝟙 − ln ρ`, so that `S(ρ + tA) ≈ S(ρ) + t·tr(A ∇S(ρ))`.
pub fn entropy_gradient(rho: &DensityState) -> Result<HermitianMatrix> {
    rho.require_positive_definite("entropy gradient")?;
    Ok(rho.spectrum().map(|l| -1.0 - l.ln()))
}

/// `S(ρ‖σ) = tr(ρ ln ρ) − tr(ρ ln σ)`, or `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Validation(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let rs = rho.spectrum();
    let ss = sigma.spectrum();
    let range: Vec<usize> = (0..ss.dim()).filter(|&j| ss.eigenvalues[j] > SUPPORT_CUTOFF).collect();

    for i in (0..rs.dim()).filter(|&i| rs.eigenvalues[i] > SUPPORT_CUTOFF) {
        let phi = rs.vector(i);
        let overlap: f64 = range
            .iter()
            .map(|&j| (ss.vector(j).adjoint() * &phi)[(0, 0)].norm_sqr())
            .sum();
        if overlap < 1.0 - SUPPORT_OVERLAP_TOLERANCE {
            return Ok(f64::INFINITY);
        }
    }

    let neg_entropy = -spectral_entropy(&rs.eigenvalues);
    let cross: f64 = range
        .iter()
        .map(|&j| ss.eigenvalues[j].ln() * rho.matrix().expectation(&ss.vector(j)))
        .sum();
    Ok(neg_entropy - cross)
}

/// `tr ρ²`.
pub fn purity(rho: &DensityState) -> f64 {
    rho.matrix().as_matrix().iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{E, LN_2};

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = DensityState::from_spectrum(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&rho, E).unwrap(), 0.0);
    }

    #[test]
    fn maximal_mixing_gives_ln_d() {
        let rho = DensityState::maximally_mixed(3);
        assert!((von_neumann_entropy(&rho, E).unwrap() - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn dyadic_spectrum() {
        let rho = DensityState::from_spectrum(&[0.5, 0.25, 0.25]).unwrap();
        assert!((von_neumann_entropy(&rho, E).unwrap() - 1.5 * LN_2).abs() < 1e-15);
        assert!((von_neumann_entropy(&rho, 2.0).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn base_must_exceed_one() {
        let rho = DensityState::maximally_mixed(2);
        assert!(matches!(von_neumann_entropy(&rho, 1.0), Err(Error::Validation(_))));
        assert!(matches!(von_neumann_entropy(&rho, 0.5), Err(Error::Validation(_))));
    }

    #[test]
    fn gradient_of_maximally_mixed_state() {
        for d in 2..=5 {
            let g = entropy_gradient(&DensityState::maximally_mixed(d)).unwrap();
            let want = HermitianMatrix::identity(d).scale((d as f64).ln() - 1.0);
            assert!(g.sub(&want).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn gradient_of_diagonal_state() {
        let g = entropy_gradient(&DensityState::from_spectrum(&[0.2, 0.3, 0.5]).unwrap()).unwrap();
        let want = HermitianMatrix::diagonal(&[-1.0 - 0.2f64.ln(), -1.0 - 0.3f64.ln(), -1.0 - 0.5f64.ln()]);
        assert!(g.sub(&want).frobenius_norm() < 1e-14);
    }

    #[test]
    fn gradient_requires_full_rank() {
        let rho = DensityState::from_spectrum(&[1.0, 0.0]).unwrap();
        assert!(matches!(entropy_gradient(&rho), Err(Error::Domain(_))));
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = sampling::random_density(3, &mut rng);
        let a = sampling::random_traceless_hermitian(3, &mut rng).scale(0.1);
        let t = 1e-6;
        let moved = DensityState::new(rho.matrix().add(&a.scale(t))).unwrap();
        let fd = (von_neumann_entropy(&moved, E).unwrap() - von_neumann_entropy(&rho, E).unwrap()) / t;
        let analytic = a.inner(&entropy_gradient(&rho).unwrap());
        assert!((fd - analytic).abs() < 1e-6, "fd={fd} analytic={analytic}");
    }

    #[test]
    fn relative_entropy_to_self_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = sampling::random_density(4, &mut rng);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_to_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=4 {
            let rho = sampling::random_density(d, &mut rng);
            let s = von_neumann_entropy(&rho, E).unwrap();
            let r = relative_entropy(&rho, &DensityState::maximally_mixed(d)).unwrap();
            assert!((r - ((d as f64).ln() - s)).abs() < 1e-12);
        }
    }

    #[test]
    fn support_violation_is_infinite() {
        let rho = DensityState::from_spectrum(&[1.0, 0.0, 0.0]).unwrap();
        let sigma = DensityState::from_spectrum(&[0.0, 0.5, 0.5]).unwrap();
        assert_eq!(relative_entropy(&rho, &sigma).unwrap(), f64::INFINITY);
        // the reverse inclusion holds only partially as well
        assert_eq!(relative_entropy(&sigma, &rho).unwrap(), f64::INFINITY);
    }

    #[test]
    fn contained_support_is_finite() {
        let rho = DensityState::from_spectrum(&[0.0, 1.0, 0.0]).unwrap();
        let sigma = DensityState::from_spectrum(&[0.0, 0.5, 0.5]).unwrap();
        assert!((relative_entropy(&rho, &sigma).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&DensityState::from_spectrum(&[1.0, 0.0]).unwrap()) - 1.0).abs() < 1e-15);
        assert!((purity(&DensityState::maximally_mixed(4)) - 0.25).abs() < 1e-15);
        assert!((purity(&DensityState::from_spectrum(&[0.5, 0.3, 0.2]).unwrap()) - 0.38).abs() < 1e-15);
    }
}
