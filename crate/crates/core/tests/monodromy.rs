use std::thread;

use entmon_core::levelset::{gauss_ratio, LevelSetSlice};
use entmon_core::monodromy::{
    run_monodromy, track, write_trace_csv, LogLiftState, MonodromyOptions, PathSpec, TrackOptions,
};
use num_complex::Complex64;

fn reference() -> LevelSetSlice {
    LevelSetSlice::through(3, vec![], 0.2, 0.3).unwrap()
}

#[test]
fn default_circle_grows_one_value_per_batch() {
    let slice = reference();
    for n in [1, 3, 5] {
        let run = run_monodromy(&slice, 0.2, None, n, &MonodromyOptions::default()).unwrap();
        assert!(run.ledger.distinct);
        assert_eq!(run.ledger.distinct_count, n + 1);
        assert!(run.ledger.lattice_verified);
    }
}

#[test]
fn default_circle_start_matches_real_ratio() {
    let run = run_monodromy(&reference(), 0.2, None, 2, &MonodromyOptions::default()).unwrap();
    let l = &run.ledger;
    assert_eq!(l.guard_shifts, 0);
    assert!((l.start_lambda2 - 0.3).abs() < 1e-12);
    assert!((l.f0 - gauss_ratio(&[0.2, 0.3]).unwrap()).abs() < 1e-13);
    assert!((l.f0 - l.log_z0 / l.log_y0).abs() < 1e-15);
}

#[test]
fn loop_around_ramification_returns_with_period_two() {
    let slice = reference();
    let path = PathSpec::circle_through(Complex64::new(0.168, 0.0), Complex64::new(0.2, 0.0)).unwrap();
    let run = run_monodromy(&slice, 0.2, Some(path), 3, &MonodromyOptions::default()).unwrap();
    assert_eq!(run.ledger.period, Some(2));
    for rec in &run.ledger.records {
        assert!(rec.lambda2_returned);
        assert_eq!((rec.winding_z, rec.winding_y), (Some(0), Some(0)));
        assert!(rec.lattice_error.unwrap() < 1e-8);
    }
    // returning to the base sheet repeats the base value
    assert!(!run.ledger.distinct);
    assert_eq!(run.ledger.distinct_count, 1);
}

#[test]
fn residual_bounded_on_every_accepted_step() {
    let slice = reference();
    let run = run_monodromy(&slice, 0.2, None, 5, &MonodromyOptions::default()).unwrap();
    let worst = run.trace.states.iter().map(|s| s.residual(&slice).norm()).fold(0.0, f64::max);
    assert!(worst <= 1e-11, "worst residual {worst:e}");
    let lift = run.trace.states.iter().map(|s| s.lift_error(&slice)).fold(0.0, f64::max);
    assert!(lift <= 1e-10, "worst lift error {lift:e}");
}

#[test]
fn reversal_returns_to_start() {
    let slice = reference();
    let start = LogLiftState::from_real(&slice, 0.2, 0.3).unwrap();
    let path = PathSpec::circle_through(Complex64::new(0.0, 0.0), Complex64::new(0.2, 0.0)).unwrap();
    let opts = TrackOptions::default();
    let fwd = track(&path, &start, &slice, &opts).unwrap();
    let back = track(&path.reversed(), fwd.end(), &slice, &opts).unwrap();
    assert!(back.end().distance(&start) < 1e-9);
}

#[test]
fn open_path_rejected() {
    let path = PathSpec::polyline(vec![Complex64::new(0.2, 0.0), Complex64::new(0.2, 0.1)], false).unwrap();
    assert!(run_monodromy(&reference(), 0.2, Some(path), 1, &MonodromyOptions::default()).is_err());
}

#[test]
fn concurrent_sessions_agree() {
    let slice = reference();
    let serial = run_monodromy(&slice, 0.2, None, 4, &MonodromyOptions::default()).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let s = slice.clone();
            thread::spawn(move || run_monodromy(&s, 0.2, None, 4, &MonodromyOptions::default()).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap().ledger, serial.ledger);
    }
}

#[test]
fn trace_csv_has_one_row_per_state() {
    let slice = reference();
    let run = run_monodromy(&slice, 0.2, None, 1, &MonodromyOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_trace_csv(&run.trace.states, &slice, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), run.trace.states.len() + 1);
}
