use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::DEGENERACY_TOLERANCE;
use crate::error::{Error, Result};

const HERMITICITY_TOLERANCE: f64 = 1e-14;
const TRACE_TOLERANCE: f64 = 1e-12;
const PSD_TOLERANCE: f64 = 1e-12;

/// A `d × d` complex matrix equal to its own conjugate transpose.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix{}", self.entries)
    }
}

impl HermitianMatrix {
    /// Validates hermiticity (to `1e-14` relative to the largest entry) and
    /// then symmetrizes so the stored matrix is exactly Hermitian.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let d = entries.nrows();
        if d == 0 || entries.ncols() != d {
            return Err(Error::Validation(format!(
                "expected a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..d {
            for j in 0..=i {
                let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if dev > HERMITICITY_TOLERANCE * scale {
                    return Err(Error::Validation(format!(
                        "matrix is not Hermitian: entry ({i},{j}) deviates by {dev:e}"
                    )));
                }
            }
        }
        let sym = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { entries: sym })
    }

    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let d = re.len();
        if re.iter().any(|row| row.len() != d) {
            return Err(Error::Validation("real part is not square".into()));
        }
        if let Some(im) = im {
            if im.len() != d || im.iter().any(|row| row.len() != d) {
                return Err(Error::Validation("imaginary part shape does not match real part".into()));
            }
        }
        let m = DMatrix::from_fn(d, d, |i, j| {
            Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        Self::new(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { entries: m }
    }

    pub fn identity(d: usize) -> Self {
        Self::diagonal(&vec![1.0; d])
    }

    pub fn zeros(d: usize) -> Self {
        Self::diagonal(&vec![0.0; d])
    }

    /// Rank-one projector `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &DVector<Complex64>) -> Self {
        Self { entries: v * v.adjoint() }
    }

    pub(crate) fn from_hermitian_unchecked(entries: DMatrix<Complex64>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { entries: &self.entries * Complex64::new(s, 0.0) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { entries: &self.entries + &other.entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { entries: &self.entries - &other.entries }
    }

    /// Real Hilbert–Schmidt inner product `tr(A B)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.entries.iter().zip(other.entries.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Frobenius norm of the commutator `[A, B]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let c = &self.entries * &other.entries - &other.entries * &self.entries;
        c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `U A U†`.
    pub fn conjugated_by(&self, u: &DMatrix<Complex64>) -> Self {
        let m = u * &self.entries * u.adjoint();
        Self { entries: (&m + m.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    /// `⟨v| A |v⟩`, real for Hermitian `A`.
    pub fn expectation(&self, v: &DVector<Complex64>) -> f64 {
        (v.adjoint() * &self.entries * v)[(0, 0)].re
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.entries[(i, j)].norm() <= tol))
    }
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> DVector<Complex64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `V f(Λ) V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let s = Complex64::new(f(self.eigenvalues[j]), 0.0);
            for i in 0..d {
                scaled[(i, j)] *= s;
            }
        }
        let m = scaled * self.eigenvectors.adjoint();
        HermitianMatrix::from_hermitian_unchecked((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|x| x)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for `d = 1`).
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors.
///
/// Each eigenvector is rotated so that its largest-magnitude component
/// (first one on ties) is real and positive, which makes the output
/// deterministic for non-degenerate spectra.
pub fn eigendecompose(m: &HermitianMatrix) -> Spectrum {
    let d = m.dim();
    let eig = m.as_matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let mut pivot = 0;
        for i in 1..d {
            if v[i].norm() > v[pivot].norm() + 1e-14 {
                pivot = i;
            }
        }
        let phase = if v[pivot].norm() > 0.0 { v[pivot].conj() / v[pivot].norm() } else { Complex64::new(1.0, 0.0) };
        let norm = v.norm();
        for i in 0..d {
            eigenvectors[(i, col)] = v[i] * phase / norm;
        }
    }
    Spectrum { eigenvalues, eigenvectors }
}

/// A unit-trace positive semidefinite Hermitian matrix with its spectrum.
///
/// Positive definiteness and non-degeneracy are not enforced at construction;
/// operations that need them call [`DensityState::require_positive_definite`]
/// or [`DensityState::require_nondegenerate`].
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
}

impl DensityState {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let spectrum = eigendecompose(&matrix);
        let smallest = spectrum.eigenvalues[0];
        if smallest < -PSD_TOLERANCE {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite (smallest eigenvalue {smallest:e})"
            )));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn from_spectrum(values: &[f64]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("spectrum has non-finite entries".into()));
        }
        Self::new(HermitianMatrix::diagonal(values))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_spectrum(&vec![1.0 / d as f64; d]).expect("I/d is a valid state")
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.spectrum.eigenvalues[0] > 0.0
    }

    pub fn require_positive_definite(&self, what: &str) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} requires a positive definite state (smallest eigenvalue {:e})",
                self.spectrum.eigenvalues[0]
            )))
        }
    }

    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        let scale = self.spectrum.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        self.spectrum.min_gap() > tol * scale
    }

    pub fn require_nondegenerate(&self, what: &str) -> Result<()> {
        if self.is_nondegenerate(DEGENERACY_TOLERANCE) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} requires a non-degenerate spectrum (smallest gap {:e})",
                self.spectrum.min_gap()
            )))
        }
    }

    /// `U ρ U†`.
    pub fn conjugated_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        Self::new(self.matrix.conjugated_by(u))
    }
}
