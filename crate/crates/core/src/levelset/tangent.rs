//! Pushforward of a linear constraint's tangent space to the eigenvalues.
//!
//! The constraint hypersurface `{X : tr(X ∇h) = const}` has tangent space
//! `∇h^⊥ ⊂ H_d`. Mapping it through the eigenvalue derivatives
//! `X ↦ (⟨φ_i|X|φ_i⟩)_i` covers all of `ℝ^d` exactly when no diagonal
//! operator `Σ b_i |φ_i⟩⟨φ_i|` is proportional to `∇h`, in particular
//! whenever `[ρ, ∇h] ≠ 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::numerical_rank;
use crate::spectral::{matrix_log, DensityState, HermitianMatrix};

/// Hilbert–Schmidt orthonormal basis of `H_d`: diagonal units, then
/// `(E_ab + E_ba)/√2` and `i(E_ab − E_ba)/√2` for `a > b`.
pub fn hs_orthonormal_basis(d: usize) -> Vec<HermitianMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        basis.push(HermitianMatrix::diagonal(&e));
    }
    for a in 0..d {
        for b in 0..a {
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            m[(a, b)] = Complex64::new(r, 0.0);
            m[(b, a)] = Complex64::new(r, 0.0);
            basis.push(HermitianMatrix::new(m).expect("symmetric"));
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            m[(a, b)] = Complex64::new(0.0, r);
            m[(b, a)] = Complex64::new(0.0, -r);
            basis.push(HermitianMatrix::new(m).expect("Hermitian"));
        }
    }
    basis
}

/// Numerical rank of the eigenvalue pushforward of `∇h^⊥`.
pub fn constraint_tangent_rank(rho: &DensityState, grad_h: &HermitianMatrix) -> Result<usize> {
    rho.require_nondegenerate("constraint tangent rank")?;
    let d = rho.dim();
    if grad_h.dim() != d {
        return Err(Error::Validation(format!("gradient is {}x{}, state is {d}x{d}", grad_h.dim(), grad_h.dim())));
    }
    let norm = grad_h.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::Validation("constraint gradient vanishes".into()));
    }
    let basis = hs_orthonormal_basis(d);
    let n = basis.len();
    let g: Vec<f64> = basis.iter().map(|b| b.inner(grad_h) / norm).collect();

    // Orthonormal basis of g^⊥ from the eigenvectors of 𝟙 − ggᵀ with eigenvalue 1.
    let proj = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - g[i] * g[j]);
    let eig = proj.symmetric_eigen();
    let complement: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 0.5).collect();
    debug_assert_eq!(complement.len(), n - 1);

    let spectrum = rho.spectrum();
    let phis: Vec<_> = (0..d).map(|i| spectrum.vector(i)).collect();
    let basis_pushforward = DMatrix::from_fn(d, n, |i, j| basis[j].expectation(&phis[i]));
    let coefficients = DMatrix::from_fn(n, complement.len(), |j, k| eig.eigenvectors[(j, complement[k])]);
    Ok(numerical_rank(&(basis_pushforward * coefficients)))
}

#[derive(Debug, Clone)]
pub struct RelentConstraint {
    /// Gradient of `ρ ↦ tr(ρ ln σ)`, i.e. `ln σ`.
    pub grad_h: HermitianMatrix,
    /// Frobenius norm of `[ρ̃, ln σ]`.
    pub commutator_norm: f64,
}

pub fn relent_constraint(sigma: &DensityState, rho_tilde: &DensityState) -> Result<RelentConstraint> {
    if sigma.dim() != rho_tilde.dim() {
        return Err(Error::Validation("σ and ρ̃ differ in dimension".into()));
    }
    let grad_h = matrix_log(sigma)?;
    let commutator_norm = rho_tilde.matrix().commutator_norm(&grad_h);
    Ok(RelentConstraint { grad_h, commutator_norm })
}
