use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levelset::LevelSetSlice;

/// Relative tolerance for `exp(L_j)` against its argument.
pub const LIFT_TOLERANCE: f64 = 1e-10;
/// Bound on the lifted level-set residual along a trace.
pub const RESIDUAL_TOLERANCE: f64 = 1e-11;

/// A point of the continued level curve with lifted logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLiftState {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    /// Lift of `ln λ₁`.
    pub l1: Complex64,
    /// Lift of `ln λ₂`.
    pub l2: Complex64,
    /// Lift of `ln(w − λ₁ − λ₂)`.
    pub l3: Complex64,
}

impl LogLiftState {
    /// State at a real point of the slice with principal (real) logarithms.
    pub fn from_real(slice: &LevelSetSlice, lambda1: f64, lambda2: f64) -> Result<Self> {
        let u = slice.mass() - lambda1 - lambda2;
        if !(lambda1 > 0.0 && lambda2 > 0.0 && u > 0.0) {
            return Err(Error::Domain(format!("({lambda1}, {lambda2}) outside the slice region")));
        }
        Ok(Self {
            lambda1: Complex64::new(lambda1, 0.0),
            lambda2: Complex64::new(lambda2, 0.0),
            l1: Complex64::new(lambda1.ln(), 0.0),
            l2: Complex64::new(lambda2.ln(), 0.0),
            l3: Complex64::new(u.ln(), 0.0),
        })
    }

    pub fn remainder(&self, slice: &LevelSetSlice) -> Complex64 {
        Complex64::new(slice.mass(), 0.0) - self.lambda1 - self.lambda2
    }

    /// `−u L₃ − λ₁ L₁ − λ₂ L₂ + S_tail − c`.
    pub fn residual(&self, slice: &LevelSetSlice) -> Complex64 {
        -self.remainder(slice) * self.l3 - self.lambda1 * self.l1 - self.lambda2 * self.l2
            + Complex64::new(slice.tail_entropy() - slice.level(), 0.0)
    }

    /// Largest relative mismatch between `exp(L_j)` and its argument.
    pub fn lift_error(&self, slice: &LevelSetSlice) -> f64 {
        let rel = |l: Complex64, arg: Complex64| (l.exp() - arg).norm() / arg.norm();
        rel(self.l1, self.lambda1)
            .max(rel(self.l2, self.lambda2))
            .max(rel(self.l3, self.remainder(slice)))
    }

    /// Lift of `ln z = ln(λ₁/u)`.
    pub fn log_z(&self) -> Complex64 {
        self.l1 - self.l3
    }

    /// Lift of `ln y = ln(λ₂/u)`.
    pub fn log_y(&self) -> Complex64 {
        self.l2 - self.l3
    }

    /// Continued Gauss-map ratio `(L₁ − L₃)/(L₂ − L₃)`.
    pub fn gauss_value(&self) -> Complex64 {
        self.log_z() / self.log_y()
    }

    pub fn check(&self, slice: &LevelSetSlice) -> Result<()> {
        let lift = self.lift_error(slice);
        if !(lift <= LIFT_TOLERANCE) {
            return Err(Error::InconsistentLift(format!("exp(L) mismatch {lift:e}")));
        }
        let res = self.residual(slice).norm();
        if !(res <= RESIDUAL_TOLERANCE) {
            return Err(Error::Tracking(format!("lifted residual {res:e} above {RESIDUAL_TOLERANCE:e}")));
        }
        Ok(())
    }

    /// Largest componentwise distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        [
            self.lambda1 - other.lambda1,
            self.lambda2 - other.lambda2,
            self.l1 - other.l1,
            self.l2 - other.l2,
            self.l3 - other.l3,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}
