//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;
const MAX_DEPTH: u32 = 60;

/// Integral estimate plus the bookkeeping of how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct State<'a, F> {
    f: &'a mut F,
    evaluations: usize,
    budget: usize,
    error: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` using adaptive
/// Simpson with the Richardson correction, spending at most `budget`
/// function evaluations.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::BadParameter(format!(
            "quadrature tolerance {tol} must be positive"
        )));
    }
    if b < a {
        let q = adaptive_simpson(f, b, a, tol, budget)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut st = State {
        f: &mut f,
        evaluations: 3,
        budget,
        error: 0.0,
    };
    let value = recurse(&mut st, a, b, fa, fm, fb, whole, tol, 0)?;
    if st.error > tol {
        return Err(Error::ToleranceNotMet {
            evaluations: st.evaluations,
            estimate: st.error,
        });
    }
    Ok(Quadrature {
        value,
        error_estimate: st.error,
        evaluations: st.evaluations,
    })
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    st: &mut State<'_, F>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if st.evaluations + 2 > st.budget {
        return Err(Error::ToleranceNotMet {
            evaluations: st.evaluations,
            estimate: f64::INFINITY,
        });
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    st.evaluations += 2;
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::ToleranceNotMet {
            evaluations: st.evaluations,
            estimate: f64::NAN,
        });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        st.error += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH || lm <= a || rm >= b {
        // Interval can no longer be split; keep the estimate and its error.
        st.error += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    let l = recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}
