//! Singular points of `λ₂(λ₁)` on the principal sheet.
//!
//! Ramification points are where the level curve meets the locus
//! `λ₂ = (w − λ₁)/2` on which `∂F/∂λ₂` vanishes, i.e. roots of
//! `g(λ₁) = F(λ₁, (w − λ₁)/2) − c`. Logarithmic singularities are where one
//! of the arguments `λ₁`, `λ₂`, `u` vanishes. The search is a grid of Newton
//! starts with principal logarithms, so completeness is best-effort.

use num_complex::Complex64;
use serde::Serialize;

use crate::levelset::LevelSetSlice;

const GRID: usize = 41;
const NEWTON_ITER: usize = 60;
const ACCEPT_RESIDUAL: f64 = 1e-10;
const DEDUP_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    /// Root of `g`, where `∂F/∂λ₂ = 0` on the level set.
    Ramification,
    /// `λ₁ = 0` or `λ₁ = w`.
    LogarithmAxis,
    /// A point where `λ₂ = 0` (equivalently `u = 0` on the swapped sheet).
    LogarithmVanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub location: Complex64,
    pub kind: BranchKind,
}

fn xlogx(z: Complex64) -> Complex64 {
    z * z.ln()
}

/// `g(λ₁) = F(λ₁, (w − λ₁)/2) − c` with principal logarithms.
pub fn ramification_residual(slice: &LevelSetSlice, l1: Complex64) -> Complex64 {
    let half = (Complex64::new(slice.mass(), 0.0) - l1) * 0.5;
    Complex64::new(slice.tail_entropy() - slice.level(), 0.0) - xlogx(l1) - xlogx(half) * 2.0
}

fn ramification_slope(slice: &LevelSetSlice, l1: Complex64) -> Complex64 {
    let half = (Complex64::new(slice.mass(), 0.0) - l1) * 0.5;
    half.ln() - l1.ln()
}

/// `F(λ₁, 0) − c`, whose roots are where `λ₂` (or `u`) vanishes.
fn vanishing_residual(slice: &LevelSetSlice, l1: Complex64) -> Complex64 {
    let rest = Complex64::new(slice.mass(), 0.0) - l1;
    Complex64::new(slice.tail_entropy() - slice.level(), 0.0) - xlogx(l1) - xlogx(rest)
}

fn vanishing_slope(slice: &LevelSetSlice, l1: Complex64) -> Complex64 {
    let rest = Complex64::new(slice.mass(), 0.0) - l1;
    rest.ln() - l1.ln()
}

fn newton_grid<G, D>(w: f64, g: G, dg: D) -> Vec<Complex64>
where
    G: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let mut roots: Vec<Complex64> = Vec::new();
    let span = 4.0 * w;
    for i in 0..GRID {
        for j in 0..GRID {
            let mut z = Complex64::new(
                -2.0 * w + span * i as f64 / (GRID - 1) as f64,
                -2.0 * w + span * j as f64 / (GRID - 1) as f64,
            );
            for _ in 0..NEWTON_ITER {
                let step = g(z) / dg(z);
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                z -= step;
                if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            let r = g(z);
            if r.re.is_finite() && r.im.is_finite() && r.norm() <= ACCEPT_RESIDUAL
                && !roots.iter().any(|q| (q - z).norm() < DEDUP_RADIUS)
            {
                roots.push(z);
            }
        }
    }
    roots
}

pub fn find_branch_points(slice: &LevelSetSlice) -> Vec<BranchPoint> {
    let w = slice.mass();
    let mut out: Vec<BranchPoint> = newton_grid(
        w,
        |z| ramification_residual(slice, z),
        |z| ramification_slope(slice, z),
    )
    .into_iter()
    .map(|location| BranchPoint { location, kind: BranchKind::Ramification })
    .collect();

    for location in [Complex64::new(0.0, 0.0), Complex64::new(w, 0.0)] {
        out.push(BranchPoint { location, kind: BranchKind::LogarithmAxis });
    }
    for location in newton_grid(w, |z| vanishing_residual(slice, z), |z| vanishing_slope(slice, z)) {
        if !out.iter().any(|b| (b.location - location).norm() < DEDUP_RADIUS) {
            out.push(BranchPoint { location, kind: BranchKind::LogarithmVanishing });
        }
    }
    out.sort_by(|a, b| a.location.re.total_cmp(&b.location.re).then(a.location.im.total_cmp(&b.location.im)));
    out
}
