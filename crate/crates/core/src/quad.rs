//! Adaptive Simpson quadrature for the sum-rate expectation.

use crate::error::{Error, Result};

const MAX_DEPTH: usize = 60;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol` with adaptive
/// Simpson refinement and Richardson extrapolation.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || !(tol > 0.0) {
        return Err(Error::Numerical(format!(
            "bad quadrature request: [{a}, {b}] at tol {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(format!(
            "quadrature failed to converge on [{a}, {b}]: residual {:.3e} at tolerance {tol:.3e}",
            delta.abs() / 15.0
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(simpson_step(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}
