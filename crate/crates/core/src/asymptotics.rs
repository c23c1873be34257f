//! Small-`h` limits of the figure measures.
//!
//! Every measure has an expansion in half-integer powers of `h`, so limits
//! are estimated by fitting `q(h) ≈ c0 + c1·√h + c2·h` on a geometric grid
//! `h_k = h0·4^(−k)` and reading off `c0`.

use crate::construction::{chord, measure_at};
use crate::curve::{canonical_graph, CurveModel, LocalGraph, PointOnCurve};
use crate::error::{Error, Result};
use crate::numeric::weighted_fit;
use rayon::prelude::*;
use serde::Serialize;

/// Ratio between consecutive heights of a sweep grid.
pub const GRID_RATIO: f64 = 4.0;
/// Number of finest samples used by one extrapolation fit.
pub const FIT_WINDOW: usize = 4;
/// Default number of grid levels for [`verify_small_h_laws`].
pub const DEFAULT_LEVELS: usize = 8;
/// Relative central-difference step for `dL/dh`.
pub const DERIVATIVE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// `(h, q(h))`, decreasing in `h`.
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: f64,
    /// Number of `√h` powers fitted beyond the constant.
    pub order: usize,
    /// Change in the estimate when the fit window moves one level coarser,
    /// or the largest fit residual when there is no coarser level.
    pub error_estimate: f64,
    pub theoretical: Option<f64>,
    pub abs_error: Option<f64>,
}

impl LimitEstimate {
    pub fn with_theoretical(mut self, value: f64) -> Self {
        self.theoretical = Some(value);
        self.abs_error = Some((self.extrapolated - value).abs());
        self
    }
}

/// `h0·4^(−k)` for `k = 0..levels`.
pub fn geometric_grid(h0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| h0 * GRID_RATIO.powi(-(k as i32))).collect()
}

fn check_grid(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < FIT_WINDOW {
        return Err(Error::BadGrid(format!(
            "need at least {FIT_WINDOW} samples, got {}",
            samples.len()
        )));
    }
    for (k, w) in samples.windows(2).enumerate() {
        let (h1, h2) = (w[0].0, w[1].0);
        if !(h1 > 0.0 && h2 > 0.0) || !w[0].1.is_finite() || !w[1].1.is_finite() {
            return Err(Error::BadGrid(format!("sample {k} is not a positive finite height")));
        }
        let r = h1 / h2;
        if (r / GRID_RATIO - 1.0).abs() > 1e-9 {
            return Err(Error::BadGrid(format!(
                "heights {h1} and {h2} have ratio {r}, expected {GRID_RATIO}"
            )));
        }
    }
    Ok(())
}

fn fit_constant(window: &[(f64, f64)]) -> Result<(f64, f64)> {
    let design: Vec<Vec<f64>> = window.iter().map(|&(h, _)| vec![1.0, h.sqrt(), h]).collect();
    let y: Vec<f64> = window.iter().map(|s| s.1).collect();
    let fit = weighted_fit(&design, &y, None)?;
    Ok((fit.coefficients[0], fit.max_abs_residual()))
}

/// Extrapolates `q(h)` to `h = 0` from samples on a ratio-4 grid.
///
/// The fit uses the [`FIT_WINDOW`] smallest heights only: the discarded
/// coarse levels carry large higher-order terms that a three-term basis
/// would otherwise smear into the constant.
pub fn limit_estimate(samples: &[(f64, f64)]) -> Result<LimitEstimate> {
    check_grid(samples)?;
    let n = samples.len();
    let first = samples[0].1;
    let (extrapolated, error_estimate) = if samples.iter().all(|s| s.1 == first) {
        (first, 0.0)
    } else {
        let (c0, resid) = fit_constant(&samples[n - FIT_WINDOW..])?;
        let err = if n > FIT_WINDOW {
            let (c1, _) = fit_constant(&samples[n - FIT_WINDOW - 1..n - 1])?;
            (c0 - c1).abs()
        } else {
            resid
        };
        (c0, err)
    };
    Ok(LimitEstimate {
        samples: samples.to_vec(),
        extrapolated,
        order: 2,
        error_estimate,
        theoretical: None,
        abs_error: None,
    })
}

/// Names of the scaled quantities whose limits are checked, in report order.
pub const LAW_NAMES: [&str; 7] = [
    "L/sqrt(h)",
    "ell/sqrt(h)",
    "S/h^1.5",
    "T/h^1.5",
    "U/h^1.5",
    "V/h^1.5",
    "W/h^1.5",
];

/// Closed-form limits of [`LAW_NAMES`] for curvature `kappa`.
pub fn law_targets(kappa: f64) -> [f64; 7] {
    let r = 2f64.sqrt() / kappa.sqrt();
    [2.0 * r, r, 4.0 * r / 3.0, r, 0.5 * r, 2.0 * r, 1.5 * r]
}

/// Closed-form limit of `alpha` for curvature `kappa`.
pub fn alpha_target(kappa: f64) -> f64 {
    2f64.sqrt() / kappa.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawEstimate {
    pub name: &'static str,
    pub estimate: LimitEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub kappa: f64,
    pub h0: f64,
    pub levels: usize,
    pub laws: Vec<LawEstimate>,
    pub alpha: LimitEstimate,
}

impl LawReport {
    /// Largest `|estimate − closed form|` over the seven laws and `alpha`.
    pub fn max_abs_error(&self) -> f64 {
        self.laws
            .iter()
            .map(|l| &l.estimate)
            .chain(std::iter::once(&self.alpha))
            .filter_map(|e| e.abs_error)
            .fold(0.0, f64::max)
    }
}

/// Estimates the seven scaled limits and `lim alpha` at one base point with
/// [`DEFAULT_LEVELS`] grid levels starting at `h0`.
pub fn verify_small_h_laws(curve: &CurveModel, at: PointOnCurve, h0: f64) -> Result<LawReport> {
    verify_small_h_laws_with(curve, at, h0, DEFAULT_LEVELS)
}

/// [`verify_small_h_laws`] with an explicit number of grid levels.
pub fn verify_small_h_laws_with(curve: &CurveModel, at: PointOnCurve, h0: f64, levels: usize) -> Result<LawReport> {
    let g = canonical_graph(curve, at)?;
    small_h_laws(&g, h0, levels)
}

/// Law report on an existing local graph.
pub fn small_h_laws(g: &LocalGraph, h0: f64, levels: usize) -> Result<LawReport> {
    if !(h0 > 0.0 && h0 < g.height_limit()) {
        return Err(Error::HeightOutOfRange {
            h: h0,
            limit: g.height_limit(),
        });
    }
    let h_min = 1e-10f64.max(1e-6 * h0);
    let grid: Vec<f64> = geometric_grid(h0, levels).into_iter().filter(|&h| h >= h_min).collect();
    if grid.len() < FIT_WINDOW {
        return Err(Error::BadGrid(format!(
            "only {} grid levels lie above the smallest usable height {h_min}",
            grid.len()
        )));
    }
    let rows: Vec<(f64, [f64; 8])> = grid
        .par_iter()
        .map(|&h| {
            let (_, m) = measure_at(g, h, None)?;
            let r = h.sqrt();
            let r3 = h * r;
            Ok((
                h,
                [
                    m.l / r,
                    m.ell / r,
                    m.s / r3,
                    m.t / r3,
                    m.u / r3,
                    m.v / r3,
                    m.w / r3,
                    m.alpha,
                ],
            ))
        })
        .collect::<Result<_>>()?;
    let kappa = g.curvature();
    let targets = law_targets(kappa);
    let column = |k: usize| -> Vec<(f64, f64)> { rows.iter().map(|(h, q)| (*h, q[k])).collect() };
    let laws = LAW_NAMES
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            Ok(LawEstimate {
                name,
                estimate: limit_estimate(&column(k))?.with_theoretical(targets[k]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha = limit_estimate(&column(7))?.with_theoretical(alpha_target(kappa));
    Ok(LawReport {
        kappa,
        h0,
        levels: rows.len(),
        laws,
        alpha,
    })
}

/// `|ell(h) − (L(h) − h·dL/dh)|` with `dL/dh` by central difference.
pub fn length_derivative_identity(curve: &CurveModel, at: PointOnCurve, h: f64) -> Result<f64> {
    length_derivative_residual(&canonical_graph(curve, at)?, h)
}

/// [`length_derivative_identity`] on an existing local graph.
pub fn length_derivative_residual(g: &LocalGraph, h: f64) -> Result<f64> {
    let d = DERIVATIVE_STEP * h;
    let len = |h: f64| chord(g, h).map(|c| c.t - c.s);
    let (lp, lm) = (len(h + d)?, len(h - d)?);
    let c = chord(g, h)?;
    let l = c.t - c.s;
    let ell = l - (1.0 / c.slope_t - 1.0 / c.slope_s) * h;
    Ok((ell - (l - h * (lp - lm) / (2.0 * d))).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_polynomial() {
        let s: Vec<(f64, f64)> = geometric_grid(1e-2, 4)
            .into_iter()
            .map(|h| (h, 5.0 + h.sqrt()))
            .collect();
        let e = limit_estimate(&s).unwrap();
        assert!((e.extrapolated - 5.0).abs() < 1e-9);
    }

    #[test]
    fn constant_is_exact() {
        let s: Vec<(f64, f64)> = geometric_grid(1.0, 5).into_iter().map(|h| (h, 0.1)).collect();
        assert_eq!(limit_estimate(&s).unwrap().extrapolated, 0.1);
    }

    #[test]
    fn circle_chord_length() {
        let s: Vec<(f64, f64)> = geometric_grid(1e-2, 6)
            .into_iter()
            .map(|h| (h, 2.0 * (2.0 * h - h * h).sqrt() / h.sqrt()))
            .collect();
        let e = limit_estimate(&s).unwrap();
        // Oracle: the closed form at h = 1e-8.
        let near = 2.0 * (2.0 * 1e-8 - 1e-16f64).sqrt() / 1e-4;
        assert!((e.extrapolated - near).abs() < 1e-7);
        assert!((e.extrapolated - 8f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn bad_grids() {
        let s = vec![(1.0, 1.0), (0.5, 1.0), (0.25, 1.0), (0.125, 1.0)];
        assert_eq!(limit_estimate(&s).unwrap_err().name(), "BadGrid");
        let s = vec![(1.0, 1.0), (0.25, 1.0), (0.0625, 1.0)];
        assert_eq!(limit_estimate(&s).unwrap_err().name(), "BadGrid");
    }

    #[test]
    fn parabola_values_are_already_the_limits() {
        let c = CurveModel::parabola(0.0, 1.0).unwrap();
        let r = verify_small_h_laws(&c, PointOnCurve::Param(0.0), 0.5).unwrap();
        for law in &r.laws {
            for &(_, q) in &law.estimate.samples {
                assert!((q - law.estimate.theoretical.unwrap()).abs() < 1e-12, "{}", law.name);
            }
        }
        assert!(r.max_abs_error() < 1e-10);
    }

    #[test]
    fn derivative_identity_closed_forms() {
        let p = CurveModel::parabola(0.0, 1.0).unwrap();
        assert!(length_derivative_identity(&p, PointOnCurve::Param(0.0), 0.5).unwrap() < 1e-10);
        let c = CurveModel::circle(1.0).unwrap();
        assert!(length_derivative_identity(&c, PointOnCurve::Param(0.0), 0.5).unwrap() < 1e-8);
    }
}
