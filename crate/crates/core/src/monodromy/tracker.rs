use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::lift::LogLiftState;
use super::path::PathSpec;
use crate::error::{Error, Result};
use crate::levelset::LevelSetSlice;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackOptions {
    /// Residual at which the corrector stops.
    pub newton_tolerance: f64,
    /// Per-step bound on `|new/old − 1|` for every logarithm argument.
    pub ratio_bound: f64,
    /// Abort once the step falls below this fraction of the path length.
    pub min_step_fraction: f64,
    pub max_corrector_iterations: usize,
    /// A correction larger than this fraction of `|λ₂ − u|` is rejected as a
    /// possible jump onto the swapped sheet.
    pub sheet_guard: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            newton_tolerance: 1e-12,
            ratio_bound: 0.5,
            min_step_fraction: 1e-9,
            max_corrector_iterations: 20,
            sheet_guard: 0.25,
        }
    }
}

/// States visited by the tracker together with their path parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub states: Vec<LogLiftState>,
    pub params: Vec<f64>,
}

impl Trace {
    pub fn start(&self) -> &LogLiftState {
        &self.states[0]
    }

    pub fn end(&self) -> &LogLiftState {
        self.states.last().expect("trace is never empty")
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn extend(&mut self, next: &Trace) {
        let offset = *self.params.last().unwrap_or(&0.0);
        self.states.extend_from_slice(&next.states[1..]);
        self.params.extend(next.params[1..].iter().map(|p| p + offset));
    }
}

enum Step {
    Accepted(LogLiftState),
    Rejected,
}

fn corrector_step(
    slice: &LevelSetSlice,
    from: &LogLiftState,
    lambda1: Complex64,
    opts: &TrackOptions,
) -> Step {
    let w = Complex64::new(slice.mass(), 0.0);
    let shift = Complex64::new(slice.tail_entropy() - slice.level(), 0.0);
    let u_old = from.remainder(slice);
    let r1 = lambda1 / from.lambda1;
    if (r1 - 1.0).norm() > opts.ratio_bound {
        return Step::Rejected;
    }
    let l1 = from.l1 + r1.ln();

    let slope = -(from.l3 - from.l1) / (from.l3 - from.l2);
    let predicted = from.lambda2 + slope * (lambda1 - from.lambda1);
    let mut x = predicted;

    let lifted = |x: Complex64| -> Option<(Complex64, Complex64, Complex64)> {
        let u = w - lambda1 - x;
        let r2 = x / from.lambda2;
        let r3 = u / u_old;
        if (r2 - 1.0).norm() > opts.ratio_bound || (r3 - 1.0).norm() > opts.ratio_bound {
            return None;
        }
        Some((u, from.l2 + r2.ln(), from.l3 + r3.ln()))
    };

    for _ in 0..opts.max_corrector_iterations {
        let Some((u, l2, l3)) = lifted(x) else {
            return Step::Rejected;
        };
        let residual = -u * l3 - lambda1 * l1 - x * l2 + shift;
        let derivative = l3 - l2;
        if residual.norm() <= opts.newton_tolerance {
            // one more Newton update polishes the root to rounding level
            let polished = x - residual / derivative;
            let candidate = match lifted(polished) {
                Some((pu, pl2, pl3)) => {
                    let pres = -pu * pl3 - lambda1 * l1 - polished * pl2 + shift;
                    if pres.norm() <= residual.norm() {
                        LogLiftState { lambda1, lambda2: polished, l1, l2: pl2, l3: pl3 }
                    } else {
                        LogLiftState { lambda1, lambda2: x, l1, l2, l3 }
                    }
                }
                None => LogLiftState { lambda1, lambda2: x, l1, l2, l3 },
            };
            let gap = (candidate.lambda2 - candidate.remainder(slice)).norm();
            if (candidate.lambda2 - predicted).norm() > opts.sheet_guard * gap {
                return Step::Rejected;
            }
            return Step::Accepted(candidate);
        }
        if derivative.norm() < f64::EPSILON {
            return Step::Rejected;
        }
        x -= residual / derivative;
        if !(x.re.is_finite() && x.im.is_finite()) {
            return Step::Rejected;
        }
    }
    Step::Rejected
}

/// Continues `start` along `path` with an Euler predictor and Newton corrector
/// on the lifted level-set equation, halving the step whenever a logarithm
/// argument would move by more than the ratio bound or the corrector fails.
pub fn track(path: &PathSpec, start: &LogLiftState, slice: &LevelSetSlice, opts: &TrackOptions) -> Result<Trace> {
    if (path.start() - start.lambda1).norm() > 1e-12 * (1.0 + start.lambda1.norm()) {
        return Err(Error::Configuration(format!(
            "path starts at {} but the state sits at λ₁ = {}",
            path.start(),
            start.lambda1
        )));
    }
    start.check(slice)?;

    let length = path.length();
    let mut trace = Trace { states: vec![*start], params: vec![0.0] };
    if length == 0.0 {
        return Ok(trace);
    }
    let max_step = 1.0 / path.steps_per_unit_arc as f64;
    let min_step = opts.min_step_fraction * length;
    let mut h = max_step.min(length);
    let mut s = 0.0;
    let mut state = *start;

    while s < length {
        let next_s = if s + h >= length { length } else { s + h };
        let lambda1 = path.point_at(next_s);
        match corrector_step(slice, &state, lambda1, opts) {
            Step::Accepted(next) => {
                state = next;
                s = next_s;
                trace.states.push(state);
                trace.params.push(s);
                h = (2.0 * h).min(max_step);
            }
            Step::Rejected => {
                h *= 0.5;
                if h < min_step {
                    log::debug!("step underflow at s = {s}, λ₁ = {}", state.lambda1);
                    return Err(Error::StepUnderflow { param: s });
                }
            }
        }
    }
    trace.end().check(slice)?;
    Ok(trace)
}

fn rounded_winding(delta_im: f64, what: &str) -> Result<i64> {
    let turns = delta_im / (2.0 * PI);
    let k = turns.round();
    if (turns - k).abs() >= 0.01 {
        return Err(Error::InconsistentLift(format!(
            "{what} turned {turns:.6} times, not an integer (the image path is not closed)"
        )));
    }
    Ok(k as i64)
}

/// Winding numbers of `z` and `y` about the origin between two states of the
/// same continuation.
pub fn winding_between(start: &LogLiftState, end: &LogLiftState) -> Result<(i64, i64)> {
    let kz = rounded_winding((end.log_z() - start.log_z()).im, "z")?;
    let ky = rounded_winding((end.log_y() - start.log_y()).im, "y")?;
    Ok((kz, ky))
}

/// Winding numbers `(k_z, k_y)` of `z = λ₁/u` and `y = λ₂/u` along a closed trace.
pub fn windings(trace: &[LogLiftState]) -> Result<(i64, i64)> {
    match (trace.first(), trace.last()) {
        (Some(a), Some(b)) => winding_between(a, b),
        _ => Err(Error::Validation("empty trace".into())),
    }
}
