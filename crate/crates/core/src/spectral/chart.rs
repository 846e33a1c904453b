//! Local diagonalizing chart around a state with simple spectrum.
//!
//! Hermitian matrices are identified with `ℝ^{d²}` through a fixed real
//! coordinatization: the real parts of the strictly lower triangle (row-major),
//! then the imaginary parts of the strictly lower triangle (same order), then
//! the diagonal. Augmenting the `d` eigenvalue functions with all `d²`
//! coordinates gives a `(d + d²) × d²` Jacobian `[C; 𝟙]`; deleting `d` rows of
//! the identity block leaves a square matrix that is invertible whenever the
//! eigenvalue derivatives are linearly independent.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{DensityState, HermitianMatrix, Spectrum};
use crate::error::{Error, Result};
use crate::numeric::{condition_number, numerical_rank};

/// Chart Jacobians with condition number below this count as full rank.
pub const CHART_CONDITION_LIMIT: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartReport {
    /// Rows of `[C; 𝟙]` kept in the square Jacobian, ascending. Rows `0..d`
    /// are the eigenvalue derivatives, row `d + k` is coordinate `k`.
    pub selected_rows: Vec<usize>,
    /// Coordinates whose identity rows were deleted, in selection order.
    pub deleted_coordinates: Vec<usize>,
    pub jacobian_condition: f64,
    pub full_rank: bool,
    /// Numerical rank of the eigenvalue-derivative block `C`.
    pub derivative_rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    Re(usize, usize),
    Im(usize, usize),
    Diag(usize),
}

fn coordinate_layout(d: usize) -> Vec<Coord> {
    let lower: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut layout: Vec<Coord> = lower.iter().map(|&(i, j)| Coord::Re(i, j)).collect();
    layout.extend(lower.iter().map(|&(i, j)| Coord::Im(i, j)));
    layout.extend((0..d).map(Coord::Diag));
    layout
}

/// Coordinates of `m` in the fixed real basis.
pub fn real_coordinates(m: &HermitianMatrix) -> Vec<f64> {
    coordinate_layout(m.dim())
        .into_iter()
        .map(|c| match c {
            Coord::Re(i, j) => m.get(i, j).re,
            Coord::Im(i, j) => m.get(i, j).im,
            Coord::Diag(i) => m.get(i, i).re,
        })
        .collect()
}

/// Inverse of [`real_coordinates`].
pub fn from_real_coordinates(d: usize, x: &[f64]) -> Result<HermitianMatrix> {
    if x.len() != d * d {
        return Err(Error::Validation(format!("expected {} coordinates, got {}", d * d, x.len())));
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for (c, &v) in coordinate_layout(d).into_iter().zip(x) {
        match c {
            Coord::Re(i, j) => {
                m[(i, j)].re = v;
                m[(j, i)].re = v;
            }
            Coord::Im(i, j) => {
                m[(i, j)].im = v;
                m[(j, i)].im = -v;
            }
            Coord::Diag(i) => m[(i, i)].re = v,
        }
    }
    HermitianMatrix::new(m)
}

/// `C[i][k] = ⟨φ_i| E_k |φ_i⟩`: derivative of the `i`-th eigenvalue along
/// the `k`-th real basis direction.
pub fn eigenvalue_derivative_block(spectrum: &Spectrum) -> DMatrix<f64> {
    let d = spectrum.dim();
    let layout = coordinate_layout(d);
    DMatrix::from_fn(d, d * d, |i, k| {
        let phi = spectrum.eigenvectors.column(i);
        match layout[k] {
            Coord::Re(a, b) => 2.0 * (phi[a].conj() * phi[b]).re,
            Coord::Im(a, b) => -2.0 * (phi[a].conj() * phi[b]).im,
            Coord::Diag(a) => phi[a].norm_sqr(),
        }
    })
}

fn stacked_jacobian(c: &DMatrix<f64>, deleted: &[usize]) -> DMatrix<f64> {
    let (d, n) = c.shape();
    let kept: Vec<usize> = (0..n).filter(|k| !deleted.contains(k)).collect();
    DMatrix::from_fn(d + kept.len(), n, |r, col| {
        if r < d {
            c[(r, col)]
        } else if kept[r - d] == col {
            1.0
        } else {
            0.0
        }
    })
}

/// Builds the square chart Jacobian at `ρ`, deleting identity rows greedily
/// so that the condition number stays as small as possible at every step.
pub fn build_chart(rho: &DensityState) -> Result<ChartReport> {
    rho.require_nondegenerate("diagonalizing chart")?;
    let d = rho.dim();
    let n = d * d;
    let c = eigenvalue_derivative_block(rho.spectrum());
    let derivative_rank = numerical_rank(&c);

    let mut deleted: Vec<usize> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut best: Option<(usize, f64)> = None;
        for k in (0..n).filter(|k| !deleted.contains(k)) {
            let mut trial = deleted.clone();
            trial.push(k);
            let cond = condition_number(&stacked_jacobian(&c, &trial));
            if best.is_none_or(|(_, b)| cond < b) {
                best = Some((k, cond));
            }
        }
        deleted.push(best.expect("d ≤ d² candidates").0);
    }

    let jacobian = stacked_jacobian(&c, &deleted);
    debug_assert_eq!(jacobian.nrows(), jacobian.ncols());
    let jacobian_condition = condition_number(&jacobian);
    let mut selected_rows: Vec<usize> = (0..d).collect();
    selected_rows.extend((0..n).filter(|k| !deleted.contains(k)).map(|k| d + k));

    Ok(ChartReport {
        selected_rows,
        deleted_coordinates: deleted,
        jacobian_condition,
        full_rank: jacobian_condition < CHART_CONDITION_LIMIT,
        derivative_rank,
    })
}
