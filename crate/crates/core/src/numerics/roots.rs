use crate::{Error, Result};

/// Upper bound on the number of halvings [`bisect`] performs on `[lo, hi]`.
pub fn bisection_iteration_bound(lo: f64, hi: f64, tol: f64) -> usize {
    let ratio = (hi - lo).abs() / tol;
    if ratio <= 1.0 {
        1
    } else {
        ratio.log2().ceil() as usize + 1
    }
}

/// Bracketing bisection; returns the midpoint of the final bracket.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    bisect_counted(f, lo, hi, tol).map(|(x, _)| x)
}

/// Like [`bisect`], also returning the number of halvings performed.
///
/// The loop stops once the bracket is no wider than `tol`, so the returned
/// point is within `tol / 2` of a sign change of `f`.
pub fn bisect_counted(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, usize)> {
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Argument(format!(
            "bisection needs finite bounds and tol > 0 (lo={lo}, hi={hi}, tol={tol})"
        )));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok((a, 0));
    }
    if fb == 0.0 {
        return Ok((b, 0));
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracketing {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let lo_negative = fa < 0.0;
    let cap = bisection_iteration_bound(a, b, tol);
    let mut iterations = 0;
    while b - a > tol && iterations < cap {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        iterations += 1;
        if fm == 0.0 {
            return Ok((mid, iterations));
        }
        if (fm < 0.0) == lo_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b), iterations))
}
