//! Analytic continuation of the implicit eigenvalue `λ₂(λ₁)` along closed
//! loops in the complex `λ₁`-plane.
//!
//! The state carries continuously lifted logarithms `L₁ ≈ ln λ₁`,
//! `L₂ ≈ ln λ₂`, `L₃ ≈ ln u` with `u = w − λ₁ − λ₂`, and the tracker solves the
//! lifted level-set equation
//!
//! ```text
//! −λ₁ L₁ − λ₂ L₂ − u L₃ + S_tail = c
//! ```
//!
//! so that after a loop the lifts record on which logarithm branches the
//! continuation has landed. The Gauss-map ratio continues as
//! `f = (L₁ − L₃)/(L₂ − L₃)`.

mod branch;
mod export;
mod ledger;
mod lift;
mod path;
mod tracker;

pub use branch::{find_branch_points, BranchKind, BranchPoint};
pub use export::write_trace_csv;
pub use ledger::{
    lemma_infinity_check, rational_guard, run_monodromy, BranchLedger, BranchRecord, GuardVerdict,
    LemmaCheck, MonodromyOptions, MonodromyRun,
};
pub use lift::LogLiftState;
pub use path::{PathKind, PathSpec};
pub use tracker::{track, winding_between, windings, Trace, TrackOptions};
