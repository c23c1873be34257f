//! Bracketed scalar root finding.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Newton's method safeguarded by bisection.
///
/// `g` returns the function value and its derivative. `[a, b]` must bracket
/// a sign change. Iteration stops once the bracket (or the Newton step)
/// shrinks below `x_tol`, or after an exact zero.
pub fn newton_bisect<F>(mut g: F, a: f64, b: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (ga, _) = g(a);
    let (gb, _) = g(b);
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.signum() == gb.signum() || !ga.is_finite() || !gb.is_finite() {
        return Err(Error::RootNotBracketed(format!("g({a}) = {ga:e}, g({b}) = {gb:e}")));
    }
    // Orient so that g(lo) < 0 < g(hi).
    let (mut lo, mut hi) = if ga < 0.0 { (a, b) } else { (b, a) };
    let mut x = 0.5 * (a + b);
    let mut prev_step = (b - a).abs();
    let mut step = prev_step;

    for _ in 0..MAX_ITER {
        let (gx, dgx) = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - gx / dgx;
        let inside = (newton - lo) * (newton - hi) < 0.0;
        let fast = (2.0 * gx).abs() <= (prev_step * dgx).abs();
        prev_step = step;
        let next = if dgx.is_finite() && dgx != 0.0 && inside && fast {
            newton
        } else {
            0.5 * (lo + hi)
        };
        step = (next - x).abs();
        x = next;

        let tol = x_tol.max(4.0 * f64::EPSILON * x.abs());
        if step <= tol || (hi - lo).abs() <= tol {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Plain bisection for a sign change of `g` on `[a, b]`.
pub fn bisect<F>(mut g: F, a: f64, b: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (a, b);
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() {
        return Err(Error::RootNotBracketed(format!("g({a}) = {glo:e}, g({b}) = {ghi:e}")));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= x_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Walks outward from `start` with geometrically growing steps until
/// `reached(x)` holds or `limit` is hit. Returns the last point that did not
/// reach and the first that did.
pub fn grow_bracket<F>(mut reached: F, start: f64, first_step: f64, limit: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> bool,
{
    let dir = (limit - start).signum();
    let span = (limit - start).abs();
    let mut step = first_step.abs().min(span);
    let mut inner = start;
    loop {
        let x = start + dir * step;
        if reached(x) {
            return Some((inner, x));
        }
        if step >= span {
            return None;
        }
        inner = x;
        step = (step * 2.0).min(span);
    }
}
