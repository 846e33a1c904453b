//! Random matrices for witnesses and tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::spectral::{DensityState, HermitianMatrix};

fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let qr = ginibre(d, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianMatrix {
    let g = ginibre(d, rng);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianMatrix::new(h).expect("symmetrized Ginibre matrix is Hermitian")
}

pub fn random_traceless_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianMatrix {
    let h = random_hermitian(d, rng);
    let shift = h.trace() / d as f64;
    h.sub(&HermitianMatrix::identity(d).scale(shift))
}

/// Flat-Dirichlet spectrum conjugated by a Haar unitary; resampled until the
/// spectrum has gaps above `1e-6` and no eigenvalue below `1e-6`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityState {
    loop {
        let mut w: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let mut sorted = w.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted[0] < 1e-6 || sorted.windows(2).any(|p| p[1] - p[0] < 1e-6) {
            continue;
        }
        let u = random_unitary(d, rng);
        let m = HermitianMatrix::diagonal(&w).conjugated_by(&u);
        // renormalize away the O(ε) trace drift from conjugation
        let m = m.scale(1.0 / m.trace());
        if let Ok(rho) = DensityState::new(m) {
            return rho;
        }
    }
}
