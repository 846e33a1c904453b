//! The entropy function on the eigenvalue chart and the geometry of its level sets.

mod slice;
mod tangent;
mod witness;

pub use slice::{
    chart_entropy, chart_entropy_gradient, gauss_ratio, lambda2_derivatives, normal_projector,
    projector_ratio, solve_lambda2, ImplicitDerivatives, LevelSetSlice, SlicePoint,
};
pub use tangent::{constraint_tangent_rank, hs_orthonormal_basis, relent_constraint, RelentConstraint};
pub use witness::{binary_entropy, binary_entropy_inverse, d2_witness, WitnessReport};
