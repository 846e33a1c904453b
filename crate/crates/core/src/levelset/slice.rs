use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Residual accepted by the real implicit-function solver.
pub const SOLVE_TOLERANCE: f64 = 1e-13;
const SOLVE_MAX_ITER: usize = 50;
const BISECTION_HALF_WIDTH: f64 = 0.1;
const SINGULAR_COMPONENT: f64 = 1e-12;

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn check_interior(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Validation("chart point must have at least one coordinate".into()));
    }
    let rest = 1.0 - x.iter().sum::<f64>();
    if x.iter().any(|&v| !(v.is_finite() && v > 0.0)) || !(rest > 0.0) {
        return Err(Error::Domain(format!(
            "chart point {x:?} is not interior (all coordinates and the remaining mass must be positive)"
        )));
    }
    Ok(rest)
}

/// Shannon entropy (natural log) of `(x₁, …, x_{d−1}, 1 − Σx)`.
pub fn chart_entropy(x: &[f64]) -> Result<f64> {
    let rest = check_interior(x)?;
    Ok(-xlogx(rest) - x.iter().map(|&v| xlogx(v)).sum::<f64>())
}

/// `∂F/∂x_i = ln(1 − Σx) − ln x_i`.
pub fn chart_entropy_gradient(x: &[f64]) -> Result<Vec<f64>> {
    let rest = check_interior(x)?;
    let lr = rest.ln();
    Ok(x.iter().map(|&v| lr - v.ln()).collect())
}

/// Projector `∇F ∇Fᵀ / ‖∇F‖²` onto the normal line of the level set through `x`.
pub fn normal_projector(x: &[f64]) -> Result<DMatrix<f64>> {
    let g = chart_entropy_gradient(x)?;
    let n2: f64 = g.iter().map(|v| v * v).sum();
    if n2 == 0.0 {
        return Err(Error::Singular("entropy gradient vanishes (critical point)".into()));
    }
    Ok(DMatrix::from_fn(g.len(), g.len(), |i, j| g[i] * g[j] / n2))
}

/// `√(P₁₁ / P₂₂)` evaluated on a projector matrix.
pub fn projector_ratio(p: &DMatrix<f64>) -> Result<f64> {
    if p.nrows() < 2 || p.ncols() < 2 {
        return Err(Error::Validation("projector must be at least 2x2".into()));
    }
    if p[(1, 1)] <= 0.0 {
        return Err(Error::Singular("second diagonal projector entry vanishes".into()));
    }
    Ok((p[(0, 0)] / p[(1, 1)]).sqrt())
}

/// Gauss-map ratio `|∇F(x)₁ / ∇F(x)₂|`.
pub fn gauss_ratio(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::Validation("gauss ratio needs at least two chart coordinates (d ≥ 3)".into()));
    }
    let g = chart_entropy_gradient(x)?;
    if g[1].abs() <= SINGULAR_COMPONENT {
        return Err(Error::Singular(format!("∂F/∂x₂ = {:e} vanishes at {x:?}", g[1])));
    }
    Ok((g[0] / g[1]).abs())
}

/// Two-variable slice of the entropy level set.
///
/// The tail eigenvalues `ξ₃, …, ξ_{d−1}` are frozen; the remaining mass
/// `w = 1 − Σξ` is shared by `λ₁`, `λ₂` and `u = w − λ₁ − λ₂`, and the slice
/// is the curve `F(λ₁, λ₂, ξ₃, …) = c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSetSlice {
    d: usize,
    c: f64,
    tail: Vec<f64>,
    w: f64,
    tail_entropy: f64,
}

impl LevelSetSlice {
    /// Slice at level `c`; requires a real level curve with `λ₁ ≠ λ₂` to exist.
    pub fn new(d: usize, c: f64, tail: Vec<f64>) -> Result<Self> {
        let slice = Self::unchecked_level(d, c, tail)?;
        if !(c > 0.0 && c < (d as f64).ln()) {
            return Err(Error::Validation(format!("level {c} outside (0, ln {d})")));
        }
        if !(c > slice.min_level() && c < slice.max_level()) {
            return Err(Error::Validation(format!(
                "level {c} not attained on this slice: need {} < c < {}",
                slice.min_level(),
                slice.max_level()
            )));
        }
        Ok(slice)
    }

    /// Like [`LevelSetSlice::new`] but also admits the maximal level of the
    /// slice, where the real curve collapses to the symmetric point. Useful
    /// for studying the branch locus.
    pub fn with_extremal_level(d: usize, c: f64, tail: Vec<f64>) -> Result<Self> {
        let slice = Self::unchecked_level(d, c, tail)?;
        if !(c > slice.min_level() && c <= slice.max_level() + 1e-12) {
            return Err(Error::Validation(format!(
                "level {c} not attained on this slice: need {} < c <= {}",
                slice.min_level(),
                slice.max_level()
            )));
        }
        Ok(slice)
    }

    /// Slice whose level passes through `(λ₁, λ₂)`.
    pub fn through(d: usize, tail: Vec<f64>, lambda1: f64, lambda2: f64) -> Result<Self> {
        let probe = Self::unchecked_level(d, 0.0, tail.clone())?;
        SlicePoint::new(&probe, lambda1, lambda2)?;
        Self::new(d, probe.value(lambda1, lambda2), tail)
    }

    fn unchecked_level(d: usize, c: f64, tail: Vec<f64>) -> Result<Self> {
        if d < 3 {
            return Err(Error::Validation(format!("slices need d >= 3, got {d}")));
        }
        if tail.len() != d - 3 {
            return Err(Error::Validation(format!(
                "d = {d} needs {} frozen tail eigenvalues, got {}",
                d - 3,
                tail.len()
            )));
        }
        if tail.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::Validation(format!("tail eigenvalues must lie in (0,1): {tail:?}")));
        }
        if !c.is_finite() {
            return Err(Error::Validation("level must be finite".into()));
        }
        let w = 1.0 - tail.iter().sum::<f64>();
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::Validation(format!("remaining mass w = {w} outside (0,1]")));
        }
        let tail_entropy = -tail.iter().map(|&x| xlogx(x)).sum::<f64>();
        Ok(Self { d, c, tail, w, tail_entropy })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> f64 {
        self.c
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    pub fn mass(&self) -> f64 {
        self.w
    }

    pub fn tail_entropy(&self) -> f64 {
        self.tail_entropy
    }

    /// `F` restricted to the slice; no domain checks.
    pub fn value(&self, lambda1: f64, lambda2: f64) -> f64 {
        let u = self.w - lambda1 - lambda2;
        self.tail_entropy - xlogx(lambda1) - xlogx(lambda2) - xlogx(u)
    }

    pub fn residual(&self, lambda1: f64, lambda2: f64) -> f64 {
        self.value(lambda1, lambda2) - self.c
    }

    /// Full chart coordinates `(λ₁, λ₂, ξ₃, …, ξ_{d−1})`.
    pub fn chart_point(&self, lambda1: f64, lambda2: f64) -> Vec<f64> {
        let mut x = vec![lambda1, lambda2];
        x.extend_from_slice(&self.tail);
        x
    }

    /// The locus `λ₂ = (w − λ₁)/2` where `∂F/∂λ₂` vanishes.
    pub fn branch_locus(&self, lambda1: f64) -> f64 {
        0.5 * (self.w - lambda1)
    }

    /// Level at the symmetric point `λ₁ = λ₂ = u = w/3`.
    pub fn max_level(&self) -> f64 {
        self.tail_entropy - self.w * (self.w / 3.0).ln()
    }

    /// Infimum of the level as `λ₁, λ₂ → 0`.
    pub fn min_level(&self) -> f64 {
        self.tail_entropy - self.w * self.w.ln()
    }

    /// Range of `λ₁` on which the ascending arc `λ₁ < λ₂ < u` of the real
    /// level curve lives. The lower end is the real branch point where
    /// `λ₂ = u` (or `0` if the arc reaches the axis); the upper end is the
    /// point with `λ₁ = λ₂`.
    pub fn ordered_interval(&self) -> Result<(f64, f64)> {
        let third = self.w / 3.0;
        let diag = |l: f64| self.residual(l, l);
        let hi = bisect(diag, 0.0, third, 0.0)
            .ok_or_else(|| Error::Domain("level curve does not meet the diagonal".into()))?;
        let locus = |l: f64| self.residual(l, self.branch_locus(l));
        let lo = if locus(0.0) >= 0.0 {
            0.0
        } else {
            bisect(locus, 0.0, third, 0.0)
                .ok_or_else(|| Error::Domain("level curve does not meet the branch locus".into()))?
        };
        Ok((lo, hi))
    }

    /// The root `λ₂ < (w − λ₁)/2` of the slice equation.
    pub fn lower_branch_lambda2(&self, lambda1: f64) -> Result<f64> {
        if !(lambda1 > 0.0 && lambda1 < self.w) {
            return Err(Error::Domain(format!("λ₁ = {lambda1} outside (0, w)")));
        }
        let m = self.branch_locus(lambda1);
        let root = bisect(|l2| self.residual(lambda1, l2), 0.0, m, SOLVE_TOLERANCE).ok_or_else(|| {
            Error::Domain(format!("no real λ₂ below the branch locus at λ₁ = {lambda1}"))
        })?;
        if root <= 0.0 || root >= m {
            return Err(Error::Domain(format!("real λ₂ degenerates at λ₁ = {lambda1}")));
        }
        solve_lambda2(lambda1, self, root)
    }
}

/// A point `(λ₁, λ₂)` of the open simplex region of a slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlicePoint {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SlicePoint {
    /// Validates positivity and `λ₁ + λ₂ < w`; the ascending convention
    /// `λ₁ < λ₂ < u` only produces a warning.
    pub fn new(slice: &LevelSetSlice, lambda1: f64, lambda2: f64) -> Result<Self> {
        let u = slice.w - lambda1 - lambda2;
        if !(lambda1 > 0.0 && lambda2 > 0.0 && u > 0.0) {
            return Err(Error::Domain(format!(
                "({lambda1}, {lambda2}) outside the slice region (w = {})",
                slice.w
            )));
        }
        if !(lambda1 < lambda2 && lambda2 < u) {
            log::warn!("slice point ({lambda1}, {lambda2}, u = {u}) violates ascending order");
        }
        Ok(Self { lambda1, lambda2 })
    }

    pub fn remainder(&self, slice: &LevelSetSlice) -> f64 {
        slice.w - self.lambda1 - self.lambda2
    }
}

/// Newton solve of `F(λ₁, ·) = c` from `seed`, staying on the seed's side of
/// the branch locus; falls back to bisection on `[seed ∓ 0.1]` clipped to
/// that side.
pub fn solve_lambda2(lambda1: f64, slice: &LevelSetSlice, seed: f64) -> Result<f64> {
    let w = slice.w;
    if !(lambda1 > 0.0 && lambda1 < w) {
        return Err(Error::Domain(format!("λ₁ = {lambda1} outside (0, w = {w})")));
    }
    let m = slice.branch_locus(lambda1);
    let (side_lo, side_hi) = if seed > 0.0 && seed < m {
        (0.0, m)
    } else if seed > m && seed < w - lambda1 {
        (m, w - lambda1)
    } else {
        return Err(Error::Tracking(format!(
            "seed {seed} is not strictly on one side of the branch locus {m} within (0, {})",
            w - lambda1
        )));
    };

    let mut x = seed;
    for _ in 0..SOLVE_MAX_ITER {
        let r = slice.residual(lambda1, x);
        if r.abs() <= SOLVE_TOLERANCE {
            return Ok(x);
        }
        let slope = (w - lambda1 - x).ln() - x.ln();
        let next = x - r / slope;
        if !(next > side_lo && next < side_hi) {
            break;
        }
        x = next;
    }

    let lo = side_lo.max(seed - BISECTION_HALF_WIDTH);
    let hi = side_hi.min(seed + BISECTION_HALF_WIDTH);
    let root = bisect(|l2| slice.residual(lambda1, l2), lo, hi, SOLVE_TOLERANCE)
        .ok_or_else(|| Error::Tracking(format!("no root of the slice equation in [{lo}, {hi}] at λ₁ = {lambda1}")))?;
    if !(root > side_lo && root < side_hi) {
        return Err(Error::Tracking(format!("root {root} crossed onto the branch locus at λ₁ = {lambda1}")));
    }
    if slice.residual(lambda1, root).abs() > SOLVE_TOLERANCE {
        return Err(Error::Tracking(format!(
            "residual {:e} above tolerance at λ₁ = {lambda1}",
            slice.residual(lambda1, root)
        )));
    }
    Ok(root)
}

/// First and second derivatives of `λ₂(λ₁)` on the level curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImplicitDerivatives {
    /// `λ₂′ = −∂₁C/∂₂C`, which equals minus the Gauss-map ratio.
    pub slope: f64,
    /// `λ₂″ = −vᵀHv / ∂₂C` with `v = (1, λ₂′)`.
    pub curvature: f64,
    /// Derivative of the Gauss-map ratio along the curve, `f′ = −λ₂″`.
    pub ratio_derivative: f64,
    /// Hessian of `C(λ₁, λ₂)`.
    pub hessian: [[f64; 2]; 2],
    pub quadratic_form: f64,
}

pub fn lambda2_derivatives(p: &SlicePoint, slice: &LevelSetSlice) -> Result<ImplicitDerivatives> {
    let (l1, l2) = (p.lambda1, p.lambda2);
    let u = p.remainder(slice);
    if !(l1 > 0.0 && l2 > 0.0 && u > 0.0) {
        return Err(Error::Domain(format!("({l1}, {l2}) outside the slice region")));
    }
    let d1 = u.ln() - l1.ln();
    let d2 = u.ln() - l2.ln();
    if d2.abs() <= SINGULAR_COMPONENT {
        return Err(Error::BranchPoint(format!("∂₂C = {d2:e} vanishes at ({l1}, {l2})")));
    }
    let slope = -d1 / d2;
    let hessian = [[-1.0 / l1 - 1.0 / u, -1.0 / u], [-1.0 / u, -1.0 / l2 - 1.0 / u]];
    let quadratic_form =
        hessian[0][0] + 2.0 * hessian[0][1] * slope + hessian[1][1] * slope * slope;
    if !(quadratic_form < 0.0) {
        return Err(Error::InternalConsistency(format!(
            "vᵀHv = {quadratic_form:e} is not negative at ({l1}, {l2})"
        )));
    }
    let curvature = -quadratic_form / d2;
    Ok(ImplicitDerivatives {
        slope,
        curvature,
        ratio_derivative: -curvature,
        hessian,
        quadratic_form,
    })
}
