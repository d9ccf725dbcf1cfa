//! One-dimensional minimisation and root finding.
//!
//! Everything here works on plain `Fn(f64) -> f64` closures. Non-finite
//! objective values are treated as `+inf`, so callers can encode
//! infeasibility by returning `f64::INFINITY`.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Default absolute tolerance on the abscissa for golden-section search.
pub const GOLDEN_TOL: f64 = 1e-10;
/// Default absolute tolerance for bisection.
pub const ROOT_TOL: f64 = 1e-12;
/// Largest upper bracket reachable by doubling.
pub const BRACKET_CAP: f64 = (1u64 << 60) as f64;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_min, f(x_min))`. The endpoints are also compared against the
/// interior optimum so that monotone objectives return the boundary value.
pub fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let (fa_end, fb_end) = (sanitize(f(a)), sanitize(f(b)));
    let (lo0, hi0) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = sanitize(f(c));
    let mut fd = sanitize(f(d));
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 400 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = sanitize(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = sanitize(f(d));
        }
        iters += 1;
    }
    let xm = 0.5 * (a + b);
    let mut best = (xm, sanitize(f(xm)));
    for cand in [(c, fc), (d, fd), (lo0, fa_end), (hi0, fb_end)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Golden-section search on `[lo, hi0]` where `hi0` is doubled (relative to
/// `lo`) until `f` is increasing at the right end of the bracket.
pub fn golden_min_expanding(f: impl Fn(f64) -> f64, lo: f64, hi0: f64, tol: f64) -> (f64, f64) {
    let mut hi = hi0;
    let mut span = hi0 - lo;
    for _ in 0..60 {
        let f_hi = sanitize(f(hi));
        let f_in = sanitize(f(hi - 0.01 * span));
        if f_hi > f_in || !f_hi.is_finite() {
            break;
        }
        span *= 2.0;
        hi = lo + span;
    }
    golden_min(f, lo, hi, tol)
}

/// Bisection for a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}] (f = {fa}, {fb})"
        )));
    }
    for _ in 0..500 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.is_nan() {
            return Err(Error::Domain(format!("objective is NaN at {m}")));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisection where the upper end starts at `hi0` and is doubled (capped at
/// 2^60) until `f` changes sign relative to `f(lo)`.
pub fn bisect_expanding(f: impl Fn(f64) -> f64, lo: f64, hi0: f64, tol: f64) -> Result<f64> {
    let flo = f(lo);
    let mut hi = hi0.max(lo + tol);
    loop {
        let fhi = f(hi);
        if fhi.signum() != flo.signum() || fhi == 0.0 {
            return bisect(&f, lo, hi, tol);
        }
        if hi >= BRACKET_CAP {
            return Err(Error::Bracket(format!(
                "no sign change on [{lo}, 2^60] (f(lo) = {flo}, f(hi) = {fhi})"
            )));
        }
        hi = (hi * 2.0).min(BRACKET_CAP);
    }
}

/// Counts sign changes of `f` on a grid of `points` log-spaced abscissae in
/// `[a, b]` (both positive). Zeros are attributed to the following sample.
pub fn count_sign_changes_log(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> usize {
    let (la, lb) = (a.ln(), b.ln());
    let mut prev: Option<f64> = None;
    let mut changes = 0;
    for i in 0..points {
        let x = (la + (lb - la) * i as f64 / (points - 1) as f64).exp();
        let v = f(x);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        if let Some(p) = prev {
            if p.signum() != v.signum() {
                changes += 1;
            }
        }
        prev = Some(v);
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn golden_returns_boundary_for_monotone() {
        let (x, _) = golden_min(|x| x, 1.0, 2.0, 1e-10);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn golden_expanding_grows_bracket() {
        let (x, _) = golden_min_expanding(|x| (x - 37.0).powi(2), 0.0, 1.0, 1e-9);
        assert!((x - 37.0).abs() < 1e-5);
    }

    #[test]
    fn infinite_objective_is_avoided() {
        let f = |x: f64| if x < 0.5 { f64::INFINITY } else { (x - 0.7).powi(2) };
        let (x, _) = golden_min(f, 0.0, 1.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-6);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn bisect_reports_missing_sign_change() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(Error::Bracket(_))));
    }

    #[test]
    fn expanding_bisection_reaches_large_root() {
        let r = bisect_expanding(|x| x - 1.0e6, 0.0, 1.0, 1e-6).unwrap();
        assert!((r - 1.0e6).abs() < 1e-5);
        assert!(bisect_expanding(|_| 1.0, 0.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn sign_change_count() {
        let n = count_sign_changes_log(|x| (x - 1.0) * (x - 10.0), 0.1, 100.0, 1000);
        assert_eq!(n, 2);
    }
}
