//! Computational tools around von Neumann entropy level sets.
//!
//! * [`spectral`]: Hermitian matrices, density states, entropy functionals,
//!   their gradients and the diagonalizing chart Jacobian.
//! * [`levelset`]: the entropy function on the eigenvalue chart, the real
//!   implicit function `λ₂(λ₁)` on a two-variable slice, its derivatives, the
//!   Gauss-map ratio, the `d = 2` purity witness and constrained tangent ranks.
//! * [`monodromy`]: analytic continuation of `λ₂(λ₁)` around closed complex
//!   loops with tracked logarithm lifts, winding numbers and the branch ledger.
//! * [`classify`]: exact decision of whether the entropy of a rational
//!   spectrum is zero, rational or transcendental.

pub mod classify;
pub mod error;
pub mod io;
pub mod levelset;
pub mod monodromy;
pub mod numeric;
pub mod sampling;
pub mod spectral;

pub use error::{Error, ErrorClass, Result};
