use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::branch::{find_branch_points, BranchPoint};
use super::lift::LogLiftState;
use super::path::PathSpec;
use super::tracker::{track, winding_between, Trace, TrackOptions};
use crate::error::{Error, Result};
use crate::levelset::{gauss_ratio, solve_lambda2, LevelSetSlice};
use crate::numeric::nearby_rational;

const GUARD_MAX_DENOMINATOR: u64 = 10_000;
const GUARD_TOLERANCE: f64 = 1e-9;
const GUARD_SHIFT_FRACTION: f64 = 1e-3;
const GUARD_MAX_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuardVerdict {
    pub ok: bool,
    /// The offending fraction `p/q`, when one was found.
    pub nearby: Option<(i128, i128)>,
    pub suggested_shift: f64,
}

/// Rejects starting ratios within `1e-9` of a fraction with denominator at most `10⁴`.
pub fn rational_guard(f0: f64, mass: f64) -> GuardVerdict {
    let nearby = nearby_rational(f0, GUARD_MAX_DENOMINATOR, GUARD_TOLERANCE);
    GuardVerdict { ok: nearby.is_none(), nearby, suggested_shift: GUARD_SHIFT_FRACTION * mass }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub all_distinct: bool,
    /// `a/b` matched a fraction with denominator at most `10⁶`.
    pub ratio_rational: Option<(i128, i128)>,
    pub values: Vec<Complex64>,
}

/// Evaluates `(a + 2πikn)/(b + 2πi m(n))` for `n = −N..=N` and checks the
/// values are pairwise distinct (relative separation above `1e-12`).
/// `m` lists `m(−N), …, m(N)`.
pub fn lemma_infinity_check(a: f64, b: f64, k: u64, m: &[i64], n_max: i64) -> Result<LemmaCheck> {
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Validation("a and b must be finite and non-zero".into()));
    }
    if k == 0 {
        return Err(Error::Validation("k must be a positive integer".into()));
    }
    if n_max < 0 || m.len() as i64 != 2 * n_max + 1 {
        return Err(Error::Validation(format!(
            "m must list 2N+1 = {} values, got {}",
            2 * n_max + 1,
            m.len()
        )));
    }
    let ratio_rational = nearby_rational(a / b, 1_000_000, 4.0 * f64::EPSILON * (a / b).abs());
    let values: Vec<Complex64> = (-n_max..=n_max)
        .zip(m)
        .map(|(n, &mn)| {
            Complex64::new(a, 2.0 * PI * k as f64 * n as f64) / Complex64::new(b, 2.0 * PI * mn as f64)
        })
        .collect();
    let all_distinct = pairwise_separated(&values, |x, y| 1e-12 * x.norm().max(y.norm()));
    Ok(LemmaCheck { all_distinct, ratio_rational, values })
}

fn pairwise_separated<F: Fn(Complex64, Complex64) -> f64>(values: &[Complex64], sep: F) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, &x)| values[i + 1..].iter().all(|&y| (x - y).norm() > sep(x, y)))
}

fn cluster_count(values: &[Complex64], sep: f64) -> usize {
    let mut reps: Vec<Complex64> = Vec::new();
    for &v in values {
        if !reps.iter().any(|r| (r - v).norm() <= sep) {
            reps.push(v);
        }
    }
    reps.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyOptions {
    pub track: TrackOptions,
    /// Minimum distance between the path and every singular point; defaults to `10⁻³·w`.
    pub exclusion_radius: Option<f64>,
    pub lattice_tolerance: f64,
    pub return_tolerance: f64,
    pub max_period: usize,
    pub distinct_separation: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        Self {
            track: TrackOptions::default(),
            exclusion_radius: None,
            lattice_tolerance: 1e-8,
            return_tolerance: 1e-8,
            max_period: 12,
            distinct_separation: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchRecord {
    pub batch_index: usize,
    /// Loops traversed from the start point.
    pub loops: usize,
    pub f_value: Complex64,
    pub lambda2_end: Complex64,
    /// Integer windings; only defined when `λ₂` returned so the images of
    /// `z` and `y` are closed curves.
    pub winding_z: Option<i64>,
    pub winding_y: Option<i64>,
    /// Raw `Δ Im ln z / 2π` and `Δ Im ln y / 2π`.
    pub turns_z: f64,
    pub turns_y: f64,
    pub lambda2_returned: bool,
    /// `|f − (ln z₀ + 2πi k_z)/(ln y₀ + 2πi k_y)|` for returned records.
    pub lattice_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchLedger {
    pub slice: LevelSetSlice,
    pub requested_lambda1: f64,
    /// Start point after any shift applied by the rational guard.
    pub start_lambda1: f64,
    pub start_lambda2: f64,
    pub guard_shifts: usize,
    pub log_z0: f64,
    pub log_y0: f64,
    pub f0: f64,
    pub path: PathSpec,
    pub exclusion_radius: f64,
    pub branch_points: Vec<BranchPoint>,
    /// Smallest `k ≤ max_period` after which `λ₂` returned, if any.
    pub period: Option<usize>,
    pub records: Vec<BranchRecord>,
    pub lattice_verified: bool,
    pub distinct: bool,
    pub distinct_count: usize,
}

impl BranchLedger {
    /// Base value followed by every recorded `f`.
    pub fn f_values(&self) -> Vec<Complex64> {
        std::iter::once(Complex64::new(self.f0, 0.0)).chain(self.records.iter().map(|r| r.f_value)).collect()
    }

    pub fn passed(&self) -> bool {
        self.lattice_verified && self.distinct
    }
}

#[derive(Debug, Clone)]
pub struct MonodromyRun {
    pub ledger: BranchLedger,
    /// Concatenated trace of every loop that was tracked.
    pub trace: Trace,
}

fn lattice_value(log_z0: f64, log_y0: f64, kz: i64, ky: i64) -> Complex64 {
    Complex64::new(log_z0, 2.0 * PI * kz as f64) / Complex64::new(log_y0, 2.0 * PI * ky as f64)
}

/// Moves `ξ₁` along the real level curve until the Gauss ratio is not close
/// to a small-denominator fraction.
fn guarded_start(slice: &LevelSetSlice, xi1: f64) -> Result<(f64, f64, usize)> {
    let mut l1 = xi1;
    let mut l2 = slice.lower_branch_lambda2(l1)?;
    for attempt in 0..=GUARD_MAX_ATTEMPTS {
        let f0 = gauss_ratio(&slice.chart_point(l1, l2))?;
        let verdict = rational_guard(f0, slice.mass());
        if verdict.ok {
            return Ok((l1, l2, attempt));
        }
        if attempt == GUARD_MAX_ATTEMPTS {
            break;
        }
        log::info!("Gauss ratio {f0} at λ₁ = {l1} is near {:?}; shifting", verdict.nearby);
        l1 += verdict.suggested_shift;
        l2 = solve_lambda2(l1, slice, l2)?;
    }
    Err(Error::Configuration(format!(
        "no start point with an irrational-looking Gauss ratio within {GUARD_MAX_ATTEMPTS} shifts of λ₁ = {xi1}"
    )))
}

/// Continues `λ₂(λ₁)` around `path` (by default the origin-centred circle
/// through `ξ₁`) and records the continued Gauss ratio after each batch.
///
/// The return period of `λ₂` is searched over up to `max_period` loops. Each
/// batch then adds `k` loops (one if no period was found). Records where
/// `λ₂` returned are checked against the lattice value built from the
/// measured windings; a mismatch is an internal-consistency error.
pub fn run_monodromy(
    slice: &LevelSetSlice,
    xi1: f64,
    path: Option<PathSpec>,
    n_batches: usize,
    opts: &MonodromyOptions,
) -> Result<MonodromyRun> {
    let (l1, l2, guard_shifts) = guarded_start(slice, xi1)?;
    let start = LogLiftState::from_real(slice, l1, l2)?;
    let log_z0 = start.log_z().re;
    let log_y0 = start.log_y().re;
    let f0 = log_z0 / log_y0;

    let path = match path {
        Some(p) => p,
        None => PathSpec::circle_through(Complex64::new(0.0, 0.0), Complex64::new(l1, 0.0))?,
    };
    if !path.is_closed() {
        return Err(Error::Configuration("monodromy needs a closed path".into()));
    }
    let exclusion_radius = opts.exclusion_radius.unwrap_or(1e-3 * slice.mass());
    let branch_points = find_branch_points(slice);
    let locations: Vec<Complex64> = branch_points.iter().map(|b| b.location).collect();
    let clearance = path.min_distance(&locations);
    if clearance <= exclusion_radius {
        return Err(Error::Configuration(format!(
            "path passes within {clearance:e} of a singular point (exclusion radius {exclusion_radius:e})"
        )));
    }

    let mut trace = Trace { states: vec![start], params: vec![0.0] };
    let mut loop_ends = vec![start];
    let returned = |s: &LogLiftState| (s.lambda2 - start.lambda2).norm() < opts.return_tolerance;

    let mut period = None;
    if n_batches > 0 {
        for j in 1..=opts.max_period {
            let leg = track(&path, loop_ends.last().unwrap(), slice, &opts.track)?;
            trace.extend(&leg);
            loop_ends.push(*leg.end());
            if returned(leg.end()) {
                period = Some(j);
                break;
            }
        }
    }
    let per_batch = period.unwrap_or(1);
    while loop_ends.len() <= n_batches * per_batch {
        let leg = track(&path, loop_ends.last().unwrap(), slice, &opts.track)?;
        trace.extend(&leg);
        loop_ends.push(*leg.end());
    }

    let mut records = Vec::with_capacity(n_batches);
    for n in 1..=n_batches {
        let loops = n * per_batch;
        let end = loop_ends[loops];
        let back = returned(&end);
        let turns_z = (end.log_z() - start.log_z()).im / (2.0 * PI);
        let turns_y = (end.log_y() - start.log_y()).im / (2.0 * PI);
        let (winding_z, winding_y, lattice_error) = if back {
            let (kz, ky) = winding_between(&start, &end)?;
            let err = (end.gauss_value() - lattice_value(log_z0, log_y0, kz, ky)).norm();
            if !(err <= opts.lattice_tolerance) {
                return Err(Error::InternalConsistency(format!(
                    "batch {n}: continued ratio {} misses the lattice value by {err:e}",
                    end.gauss_value()
                )));
            }
            (Some(kz), Some(ky), Some(err))
        } else {
            (None, None, None)
        };
        records.push(BranchRecord {
            batch_index: n,
            loops,
            f_value: end.gauss_value(),
            lambda2_end: end.lambda2,
            winding_z,
            winding_y,
            turns_z,
            turns_y,
            lambda2_returned: back,
            lattice_error,
        });
    }

    let mut ledger = BranchLedger {
        slice: slice.clone(),
        requested_lambda1: xi1,
        start_lambda1: l1,
        start_lambda2: l2,
        guard_shifts,
        log_z0,
        log_y0,
        f0,
        path,
        exclusion_radius,
        branch_points,
        period,
        records,
        lattice_verified: true,
        distinct: false,
        distinct_count: 0,
    };
    let values = ledger.f_values();
    ledger.distinct = pairwise_separated(&values, |_, _| opts.distinct_separation);
    ledger.distinct_count = cluster_count(&values, opts.distinct_separation);
    Ok(MonodromyRun { ledger, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_rejects_small_fractions() {
        let v = rational_guard(1.0, 1.0);
        assert!(!v.ok);
        assert_eq!(v.nearby, Some((1, 1)));
        assert!((v.suggested_shift - 1e-3).abs() < 1e-18);
        assert!(!rational_guard(0.375 + 1e-11, 1.0).ok);
    }

    #[test]
    fn guard_accepts_log_ratio() {
        let f0 = 2.5f64.ln() / (5.0f64 / 3.0).ln();
        assert!(rational_guard(f0, 1.0).ok);
    }

    #[test]
    fn quotients_distinct_for_independent_logs() {
        let c = lemma_infinity_check(2f64.ln(), 3f64.ln(), 1, &[0; 11], 5).unwrap();
        assert!(c.all_distinct);
        assert_eq!(c.values.len(), 11);
        assert!(c.ratio_rational.is_none());
    }

    #[test]
    fn quotients_collapse_for_matched_map() {
        let a = 2f64.ln();
        let m: Vec<i64> = (-4..=4).collect();
        let c = lemma_infinity_check(a, a, 1, &m, 4).unwrap();
        assert!(!c.all_distinct);
        assert!(c.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        assert_eq!(c.ratio_rational, Some((1, 1)));
    }

    #[test]
    fn quotients_collide_for_rational_ratio() {
        // a/b = 2: n = 0 and n = 2 collide once m(2) − m(0) = 1
        let b = 2f64.ln();
        let a = 2.0 * b;
        let m: Vec<i64> = (-3..=3i64).map(|n| n.div_euclid(2)).collect();
        let c = lemma_infinity_check(a, b, 1, &m, 3).unwrap();
        assert!(!c.all_distinct);
        assert_eq!(c.ratio_rational, Some((2, 1)));
    }

    #[test]
    fn quotient_check_input_validation() {
        assert!(lemma_infinity_check(0.0, 1.0, 1, &[0], 0).is_err());
        assert!(lemma_infinity_check(1.0, 1.0, 0, &[0], 0).is_err());
        assert!(lemma_infinity_check(1.0, 2.0, 1, &[0, 0], 1).is_err());
    }

    #[test]
    fn zero_batches_report_base_only() {
        let slice = LevelSetSlice::through(3, vec![], 0.2, 0.3).unwrap();
        let run = run_monodromy(&slice, 0.2, None, 0, &MonodromyOptions::default()).unwrap();
        assert!(run.ledger.records.is_empty());
        assert!((run.ledger.f0 - gauss_ratio(&[0.2, 0.3]).unwrap()).abs() < 1e-14);
        assert_eq!(run.ledger.period, None);
        assert!(run.ledger.passed());
        assert_eq!(run.trace.states.len(), 1);
    }

    #[test]
    fn symmetric_start_is_shifted() {
        // λ₁ = λ₂ gives f = 1 exactly; the guard must move off it
        let slice = LevelSetSlice::new(4, 1.2, vec![0.1]).unwrap();
        let (_, hi) = slice.ordered_interval().unwrap();
        let (l1, l2, shifts) = guarded_start(&slice, hi).unwrap_or_else(|e| panic!("{e}"));
        assert!(shifts >= 1);
        assert!(l1 > hi);
        assert!(slice.residual(l1, l2).abs() <= 1e-13);
    }

    #[test]
    fn path_through_singular_point_rejected() {
        let slice = LevelSetSlice::through(3, vec![], 0.2, 0.3).unwrap();
        let path = PathSpec::polyline(
            vec![Complex64::new(0.2, 0.0), Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.2)],
            true,
        )
        .unwrap();
        assert!(matches!(
            run_monodromy(&slice, 0.2, Some(path), 1, &MonodromyOptions::default()),
            Err(Error::Configuration(_))
        ));
    }
}
