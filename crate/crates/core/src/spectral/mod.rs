//! Hermitian linear algebra, entropy functionals and the diagonalizing chart.

mod chart;
mod entropy;
mod matrix;

pub use chart::{build_chart, eigenvalue_derivative_block, from_real_coordinates, real_coordinates, ChartReport};
pub use entropy::{entropy_gradient, matrix_log, purity, relative_entropy, spectral_entropy, von_neumann_entropy};
pub use matrix::{eigendecompose, DensityState, HermitianMatrix, Spectrum};

/// Relative gap below which two eigenvalues count as coincident.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues at or below this size are dropped from `λ ln λ` sums.
pub const ZERO_EIGENVALUE_CUTOFF: f64 = 1e-15;
