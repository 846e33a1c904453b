//! Small numerical helpers shared by the engines.

use nalgebra::DMatrix;

/// Relative singular-value threshold below which a direction counts as null.
pub const RANK_THRESHOLD: f64 = 1e-8;

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank: singular values above `RANK_THRESHOLD × σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > RANK_THRESHOLD * top).count(),
        _ => 0,
    }
}

/// Spectral condition number `σ_max / σ_min` (infinite for rank-deficient input).
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Continued-fraction convergents `p/q` of `x` with `q <= max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p_prev, mut p) = (1i128, x.floor() as i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    out.push((p, q));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-300 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a > 1e18 {
            break;
        }
        let a = a as i128;
        let p_next = a * p + p_prev;
        let q_next = a * q + q_prev;
        if q_next > max_den as i128 {
            break;
        }
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        out.push((p, q));
        frac = inv - inv.floor();
    }
    out
}

/// Closest convergent with denominator at most `max_den` lying within `tol` of `x`.
pub fn nearby_rational(x: f64, max_den: u64, tol: f64) -> Option<(i128, i128)> {
    convergents(x, max_den)
        .into_iter()
        .find(|&(p, q)| (x - p as f64 / q as f64).abs() <= tol)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once
/// `|f| <= ftol` or the bracket collapses to machine resolution.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, ftol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite()) || flo * fhi > 0.0 {
        return None;
    }
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= ftol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
