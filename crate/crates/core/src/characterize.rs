//! Parabola recognition and reconstruction from figure measures.
//!
//! On a parabola the ratios `S/T`, `S/V`, `S/W`, `U/T` and `ell/L` are the
//! constants `4/3`, `2/3`, `8/9`, `1/2`, `1/2` at every base point and every
//! height, and each of the area identities alone forces the curve to be a
//! parabola. Detection therefore sweeps a grid of `(P, h)` cells and measures
//! how far each ratio family strays from its constant.

use crate::construction::{measure_at, Measures};
use crate::curve::{canonical_graph, CurveModel, LocalGraph, PointOnCurve};
use crate::error::{Error, Result};
use crate::geom::{Frame, Point2};
use crate::numeric::{linspace, weighted_fit};
use rayon::prelude::*;
use serde::Serialize;

/// Detection tolerance for analytic curves.
pub const ANALYTIC_TOL: f64 = 1e-6;
/// Sampled-curve tolerance: multiple of the relative noise `σ/h`.
pub const NOISE_FACTOR: f64 = 50.0;
/// Sampled-curve tolerance: multiple of the relative quartic misfit.
pub const MISFIT_FACTOR: f64 = 2.0;
/// Detection needs some point whose largest height reaches this fraction of
/// its working range.
pub const SPREAD_FLOOR: f64 = 1e-3;
/// Distinct heights needed per base point.
pub const MIN_HEIGHTS: usize = 3;

/// The ratio families, their parabola constants, and whether they take part
/// in the verdict (`ell/L` is a length ratio and is only reported).
pub const FAMILIES: [(&str, f64, bool); 5] = [
    ("S/T", 4.0 / 3.0, true),
    ("S/V", 2.0 / 3.0, true),
    ("S/W", 8.0 / 9.0, true),
    ("U/T", 0.5, true),
    ("ell/L", 0.5, false),
];

/// Heights swept at every base point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HeightGrid {
    /// `h_max·4^(−k)`, `k = 0..levels`.
    Absolute {
        h_max: f64,
        levels: usize,
    },
    /// `fraction·limit(P)·4^(−k)`, where `limit(P)` is the working range of
    /// the local graph at `P`.
    Relative {
        fraction: f64,
        levels: usize,
    },
    Explicit(Vec<f64>),
}

impl HeightGrid {
    fn heights(&self, limit: f64) -> Vec<f64> {
        let geometric = |top: f64, n: usize| (0..n).map(|k| top * 4f64.powi(-(k as i32))).collect();
        let mut h: Vec<f64> = match self {
            HeightGrid::Absolute { h_max, levels } => geometric(*h_max, *levels),
            HeightGrid::Relative { fraction, levels } => geometric(fraction * limit, *levels),
            HeightGrid::Explicit(v) => v.clone(),
        };
        h.sort_by(|a, b| b.total_cmp(a));
        h
    }

    fn is_empty(&self) -> bool {
        match self {
            HeightGrid::Absolute { levels, .. } | HeightGrid::Relative { levels, .. } => *levels == 0,
            HeightGrid::Explicit(v) => v.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub p_id: usize,
    /// Base point in world coordinates (absent when no local graph exists).
    pub p: Option<Point2>,
    pub h: f64,
    /// Working range of the local graph at `P`.
    pub height_limit: f64,
    pub measures: Option<Measures>,
    pub skip_reason: Option<String>,
}

impl RatioRow {
    /// `[S/T, S/V, S/W, U/T, ell/L]`, in [`FAMILIES`] order.
    pub fn ratios(&self) -> Option<[f64; 5]> {
        self.measures
            .map(|m| [m.ratio_st(), m.ratio_sv(), m.ratio_sw(), m.ratio_ut(), m.ratio_ell_l()])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioTable {
    pub curve: String,
    pub points: Vec<PointOnCurveTag>,
    pub grid: HeightGrid,
    /// Sorted by `p_id`, then by decreasing `h`.
    pub rows: Vec<RatioRow>,
    /// Noise and misfit estimates of a sampled source curve.
    pub noise: Option<SampledNoise>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledNoise {
    pub noise: f64,
    pub misfit: f64,
}

/// Serializable form of a base-point specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PointOnCurveTag {
    Param(f64),
    Point(Point2),
    Sample(usize),
}

impl From<PointOnCurve> for PointOnCurveTag {
    fn from(p: PointOnCurve) -> Self {
        match p {
            PointOnCurve::Param(u) => PointOnCurveTag::Param(u),
            PointOnCurve::Point(q) => PointOnCurveTag::Point(q),
            PointOnCurve::Sample(i) => PointOnCurveTag::Sample(i),
        }
    }
}

impl RatioTable {
    pub fn valid_rows(&self) -> impl Iterator<Item = &RatioRow> {
        self.rows.iter().filter(|r| r.measures.is_some())
    }

    pub fn skipped(&self) -> usize {
        self.rows.len() - self.valid_rows().count()
    }

    /// Smallest height among measured cells.
    pub fn min_height(&self) -> Option<f64> {
        self.valid_rows().map(|r| r.h).reduce(f64::min)
    }

    /// Smallest, over base points, of the largest measured height.
    pub fn min_top_height(&self) -> Option<f64> {
        (0..self.points.len())
            .filter_map(|p| self.valid_rows().filter(|r| r.p_id == p).map(|r| r.h).reduce(f64::max))
            .reduce(f64::min)
    }
}

/// Measures every `(P, h)` cell; cells outside the working range are kept
/// with a skip reason.
pub fn ratio_profile(curve: &CurveModel, points: &[PointOnCurve], grid: &HeightGrid) -> Result<RatioTable> {
    if points.is_empty() || grid.is_empty() {
        return Err(Error::EmptyGrid(format!(
            "{} base points and {} heights",
            points.len(),
            if grid.is_empty() { 0 } else { 1 }
        )));
    }
    let rows: Vec<Vec<RatioRow>> = points
        .par_iter()
        .enumerate()
        .map(|(p_id, &at)| profile_point(curve, p_id, at, grid))
        .collect();
    Ok(RatioTable {
        curve: curve.label().to_string(),
        points: points.iter().map(|&p| p.into()).collect(),
        grid: grid.clone(),
        rows: rows.into_iter().flatten().collect(),
        noise: curve.sampled_model().map(|m| SampledNoise {
            noise: m.noise_estimate(),
            misfit: m.misfit_estimate(),
        }),
    })
}

fn profile_point(curve: &CurveModel, p_id: usize, at: PointOnCurve, grid: &HeightGrid) -> Vec<RatioRow> {
    let g = match canonical_graph(curve, at) {
        Ok(g) => g,
        Err(e) => {
            let reason = e.to_string();
            let heights = grid.heights(f64::NAN);
            return heights
                .into_iter()
                .map(|h| RatioRow {
                    p_id,
                    p: None,
                    h,
                    height_limit: f64::NAN,
                    measures: None,
                    skip_reason: Some(reason.clone()),
                })
                .collect();
        }
    };
    grid.heights(g.height_limit())
        .into_par_iter()
        .map(|h| {
            let (measures, skip_reason) = match measure_at(&g, h, None) {
                Ok((_, m)) => (Some(m), None),
                Err(e) => (None, Some(e.to_string())),
            };
            RatioRow {
                p_id,
                p: Some(g.base_point()),
                h,
                height_limit: g.height_limit(),
                measures,
                skip_reason,
            }
        })
        .collect()
}

/// How the detection tolerance is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// [`ANALYTIC_TOL`] for analytic curves. For sampled curves
    /// `max(ANALYTIC_TOL, (NOISE_FACTOR·σ + MISFIT_FACTOR·m)/h_top)` with `σ`
    /// the noise, `m` the quartic misfit and `h_top` the largest measured
    /// height (smallest over base points): an error `e` in the local graph
    /// moves the ratios at height `h` by about `e/h`.
    Auto,
    Fixed(f64),
}

impl Tolerance {
    pub fn resolve(self, table: &RatioTable) -> f64 {
        match self {
            Tolerance::Fixed(t) => t,
            Tolerance::Auto => match (table.noise, table.min_top_height()) {
                (Some(n), Some(h)) => ANALYTIC_TOL.max((NOISE_FACTOR * n.noise + MISFIT_FACTOR * n.misfit) / h),
                _ => ANALYTIC_TOL,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyDeviation {
    pub family: &'static str,
    pub target: f64,
    /// Largest `|ratio − target|` over measured cells.
    pub max_deviation: f64,
    /// Cell where the maximum occurs.
    pub witness_p: usize,
    pub witness_h: f64,
    pub decisive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub is_parabola: bool,
    pub tolerance: f64,
    pub families: Vec<FamilyDeviation>,
    /// Decisive family with the largest deviation.
    pub worst_family: &'static str,
    /// Per-point `(λ, μ)` of the `S ≈ λ·V^μ` fit, where the heights allow one.
    pub lambda_by_point: Vec<Option<PowerLaw>>,
    /// `max λ − min λ` over the fitted points.
    pub lambda_spread: Option<f64>,
    pub cells: usize,
    pub skipped: usize,
    pub h_range: (f64, f64),
}

impl Verdict {
    pub fn family(&self, name: &str) -> Option<&FamilyDeviation> {
        self.families.iter().find(|f| f.family == name)
    }

    /// Verdict of a single family at the verdict's tolerance.
    pub fn family_says_parabola(&self, name: &str) -> Option<bool> {
        self.family(name).map(|f| f.max_deviation < self.tolerance)
    }
}

/// Decides whether the table's curve is a parabola on the sampled grid.
pub fn detect_parabola(table: &RatioTable, tol: Tolerance) -> Result<Verdict> {
    let tolerance = tol.resolve(table);
    let p_count = table.points.len();
    let mut spread_ok = false;
    for p in 0..p_count {
        let mut hs: Vec<(f64, f64)> = table
            .valid_rows()
            .filter(|r| r.p_id == p)
            .map(|r| (r.h, r.height_limit))
            .collect();
        hs.dedup_by(|a, b| a.0 == b.0);
        if hs.len() >= MIN_HEIGHTS && hs.iter().any(|(h, lim)| *h >= SPREAD_FLOOR * lim) {
            spread_ok = true;
        }
    }
    if !spread_ok {
        return Err(Error::InsufficientSpread(format!(
            "no base point has {MIN_HEIGHTS} measured heights reaching {SPREAD_FLOOR} of its working range"
        )));
    }
    let mut families: Vec<FamilyDeviation> = FAMILIES
        .iter()
        .map(|&(family, target, decisive)| FamilyDeviation {
            family,
            target,
            max_deviation: 0.0,
            witness_p: 0,
            witness_h: f64::NAN,
            decisive,
        })
        .collect();
    let mut h_range = (f64::INFINITY, 0.0f64);
    for row in table.valid_rows() {
        h_range = (h_range.0.min(row.h), h_range.1.max(row.h));
        let r = row.ratios().expect("valid row");
        for (f, value) in families.iter_mut().zip(r) {
            let d = (value - f.target).abs();
            // NaN ratios count as maximal deviations.
            if !(d <= f.max_deviation) {
                f.max_deviation = if d.is_nan() { f64::INFINITY } else { d };
                f.witness_p = row.p_id;
                f.witness_h = row.h;
            }
        }
    }
    let is_parabola = families
        .iter()
        .filter(|f| f.decisive)
        .all(|f| f.max_deviation < tolerance);
    let worst_family = families
        .iter()
        .filter(|f| f.decisive)
        .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
        .map_or("", |f| f.family);
    let lambda_by_point: Vec<Option<PowerLaw>> = (0..p_count)
        .map(|p| {
            let pairs: Vec<(f64, f64)> = table
                .valid_rows()
                .filter(|r| r.p_id == p)
                .filter_map(|r| r.measures.map(|m| (m.v, m.s)))
                .collect();
            power_law_fit(&pairs).ok()
        })
        .collect();
    let lambdas: Vec<f64> = lambda_by_point.iter().flatten().map(|f| f.lambda).collect();
    let lambda_spread = if lambdas.is_empty() {
        None
    } else {
        let lo = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = lambdas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(hi - lo)
    };
    Ok(Verdict {
        is_parabola,
        tolerance,
        families,
        worst_family,
        lambda_by_point,
        lambda_spread,
        cells: table.rows.len(),
        skipped: table.skipped(),
        h_range,
    })
}

/// Parabola `x² − 2a·x·y + a²·y² − 2b·y = 0` in the canonical frame of a
/// base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicCoefficients {
    pub a: f64,
    pub b: f64,
}

impl ConicCoefficients {
    /// `[A, B, C, D, E, F]` of `A x² + B xy + C y² + D x + E y + F` in the
    /// canonical frame.
    pub fn implicit(&self) -> [f64; 6] {
        let (a, b) = (self.a, self.b);
        [1.0, -2.0 * a, a * a, 0.0, -2.0 * b, 0.0]
    }

    pub fn residual(&self, local: Point2) -> f64 {
        let (x, y) = (local.x, local.y);
        x * x - 2.0 * self.a * x * y + self.a * self.a * y * y - 2.0 * self.b * y
    }

    /// Implicit coefficients in world coordinates for the given frame.
    pub fn world_implicit(&self, frame: &Frame) -> [f64; 6] {
        let (t, n, o) = (frame.tangent, frame.normal, frame.origin);
        let [qa, qb, qc, _, qe, _] = self.implicit();
        // Linear forms x = t·w − t·o, y = n·w − n·o.
        let (tx, ty, t0) = (t.x, t.y, -t.dot(o));
        let (nx, ny, n0) = (n.x, n.y, -n.dot(o));
        let mut c = [0.0; 6];
        let mut add_product = |k: f64, (a1, b1, c1): (f64, f64, f64), (a2, b2, c2): (f64, f64, f64)| {
            c[0] += k * a1 * a2;
            c[1] += k * (a1 * b2 + b1 * a2);
            c[2] += k * b1 * b2;
            c[3] += k * (a1 * c2 + c1 * a2);
            c[4] += k * (b1 * c2 + c1 * b2);
            c[5] += k * c1 * c2;
        };
        let xl = (tx, ty, t0);
        let yl = (nx, ny, n0);
        add_product(qa, xl, xl);
        add_product(qb, xl, yl);
        add_product(qc, yl, yl);
        c[3] += qe * nx;
        c[4] += qe * ny;
        c[5] += qe * n0;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub coefficients: ConicCoefficients,
    pub implicit: [f64; 6],
    pub world_implicit: [f64; 6],
    /// Largest `|x² − 2axy + a²y² − 2by|` over points of the local graph.
    pub residual: f64,
    /// Residual threshold `1e-8·scale²`.
    pub threshold: f64,
    pub is_parabola: bool,
}

impl Reconstruction {
    pub fn status(&self) -> &'static str {
        if self.is_parabola {
            "Parabola"
        } else {
            "NotAParabola"
        }
    }
}

/// Number of points at which the recovered conic is checked.
const RESIDUAL_PROBES: usize = 41;

/// Recovers the parabola through `P` from `f''(0)` and `f'''(0)`:
/// `b = 1/f''(0)` and `a = −f'''(0)·b²/3`.
pub fn reconstruct_parabola(g: &LocalGraph) -> Result<Reconstruction> {
    let f2 = g.curvature();
    let f3 = g.third_derivative().ok_or(Error::MissingThirdDerivative)?;
    let b = 1.0 / f2;
    let a = -f3 * b * b / 3.0;
    let coefficients = ConicCoefficients { a, b };
    // Probe where the graph is not steep, so the check weighs both sides.
    let (lo, hi) = g.x_range();
    let reach = 0.9 * lo.abs().min(hi).min(10.0 * b);
    let mut residual = 0.0f64;
    for x in linspace(-reach, reach, RESIDUAL_PROBES) {
        let [y, ..] = g.eval(x)?;
        residual = residual.max(coefficients.residual(Point2::new(x, y)).abs());
    }
    let threshold = 1e-8 * g.scale() * g.scale();
    Ok(Reconstruction {
        coefficients,
        implicit: coefficients.implicit(),
        world_implicit: coefficients.world_implicit(&g.frame()),
        residual,
        threshold,
        is_parabola: residual < threshold,
    })
}

/// Residuals of the graph-level differential characterizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphOdeReport {
    /// `max |2f²f'' − f'²(t f' − f)|` over the grid.
    pub tangent_ode: f64,
    /// Least-squares constant `a` in `2/f' = t/f + a`.
    pub fitted_a: f64,
    /// `max |2/f' − t/f − a|` at the fitted `a`.
    pub slope_relation: f64,
    pub grid: Vec<f64>,
}

/// Evaluates both differential characterizations of a parabola on `ts`,
/// which must avoid `t = 0`.
pub fn graph_ode_residuals(g: &LocalGraph, ts: &[f64]) -> Result<GraphOdeReport> {
    if ts.is_empty() {
        return Err(Error::EmptyGrid("no abscissas".into()));
    }
    if ts.contains(&0.0) {
        return Err(Error::SingularAtOrigin);
    }
    let mut tangent_ode = 0.0f64;
    let mut rel = Vec::with_capacity(ts.len());
    for &t in ts {
        let [f, f1, f2] = g.eval(t)?;
        let lhs = 2.0 * f * f * f2;
        let rhs = f1 * f1 * (t * f1 - f);
        tangent_ode = tangent_ode.max((lhs - rhs).abs());
        rel.push(2.0 / f1 - t / f);
    }
    let fitted_a = rel.iter().sum::<f64>() / rel.len() as f64;
    let slope_relation = rel.iter().fold(0.0f64, |m, r| m.max((r - fitted_a).abs()));
    Ok(GraphOdeReport {
        tangent_ode,
        fitted_a,
        slope_relation,
        grid: ts.to_vec(),
    })
}

/// Fit of `L(h) = C1·√h + C2·√h·ln h`, the solution family of
/// `4h²L'' + L = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerFit {
    pub c1: f64,
    pub c2: f64,
    /// Largest `|L − C1√h − C2√h ln h| / max|L|`: distance of the data from
    /// the solution family.
    pub residual: f64,
}

/// Samples needed by [`euler_fit`].
pub const EULER_MIN_SAMPLES: usize = 5;

pub fn euler_fit(samples: &[(f64, f64)]) -> Result<EulerFit> {
    if samples.len() < EULER_MIN_SAMPLES {
        return Err(Error::BadGrid(format!(
            "need at least {EULER_MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if let Some(i) = samples.iter().position(|(h, _)| !(*h > 0.0)) {
        return Err(Error::NonPositiveSample { index: i });
    }
    let design: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(h, _)| vec![h.sqrt(), h.sqrt() * h.ln()])
        .collect();
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let fit = weighted_fit(&design, &y, None)?;
    let size = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(EulerFit {
        c1: fit.coefficients[0],
        c2: fit.coefficients[1],
        residual: if size > 0.0 { fit.max_abs_residual() / size } else { 0.0 },
    })
}

/// `value ≈ λ·base^μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub lambda: f64,
    pub mu: f64,
    /// RMS residual of the log-log fit.
    pub log_rms: f64,
}

/// Least squares on `ln value = ln λ + μ ln base`. Needs at least three
/// positive samples whose bases span two decades.
pub fn power_law_fit(samples: &[(f64, f64)]) -> Result<PowerLaw> {
    if let Some(i) = samples.iter().position(|(b, v)| !(*b > 0.0 && *v > 0.0)) {
        return Err(Error::NonPositiveSample { index: i });
    }
    if samples.len() < 3 {
        return Err(Error::InsufficientSpread(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hi / lo < 100.0 {
        return Err(Error::InsufficientSpread(format!(
            "bases span {:.3} decades, need 2",
            (hi / lo).log10()
        )));
    }
    let design: Vec<Vec<f64>> = samples.iter().map(|s| vec![1.0, s.0.ln()]).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let fit = weighted_fit(&design, &y, None)?;
    Ok(PowerLaw {
        lambda: fit.coefficients[0].exp(),
        mu: fit.coefficients[1],
        log_rms: fit.rms(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> CurveModel {
        CurveModel::circle(1.0).unwrap()
    }

    #[test]
    fn parabola_rows_hit_the_constants() {
        let c = CurveModel::parabola(0.0, 1.0).unwrap();
        let table = ratio_profile(
            &c,
            &c.default_points(5),
            &HeightGrid::Absolute { h_max: 1.0, levels: 5 },
        )
        .unwrap();
        assert_eq!(table.rows.len(), 25);
        for row in &table.rows {
            let r = row.ratios().unwrap();
            for (v, (_, target, _)) in r.iter().zip(FAMILIES) {
                assert!((v - target).abs() < 1e-8 * target, "{v} vs {target}");
            }
        }
    }

    #[test]
    fn circle_u_over_t() {
        let table = ratio_profile(&circle(), &[PointOnCurve::Param(0.0)], &HeightGrid::Explicit(vec![0.5])).unwrap();
        let r = table.rows[0].ratios().unwrap();
        assert!((r[3] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_cells_are_skipped() {
        let table = ratio_profile(
            &circle(),
            &[PointOnCurve::Param(0.0)],
            &HeightGrid::Explicit(vec![5.0, 0.1]),
        )
        .unwrap();
        assert_eq!(table.skipped(), 1);
        assert!(table.rows[0]
            .skip_reason
            .as_ref()
            .unwrap()
            .starts_with("HeightOutOfRange"));
    }

    #[test]
    fn empty_grid() {
        let e = ratio_profile(&circle(), &[], &HeightGrid::Explicit(vec![0.1])).unwrap_err();
        assert_eq!(e.name(), "EmptyGrid");
    }

    #[test]
    fn circle_is_not_a_parabola() {
        let c = circle();
        let table = ratio_profile(
            &c,
            &c.default_points(4),
            &HeightGrid::Absolute { h_max: 0.3, levels: 5 },
        )
        .unwrap();
        let v = detect_parabola(&table, Tolerance::Fixed(1e-6)).unwrap();
        assert!(!v.is_parabola);
        assert_eq!(v.worst_family, "U/T");
    }

    #[test]
    fn tiny_heights_are_insufficient() {
        let c = circle();
        let table = ratio_profile(&c, &c.default_points(3), &HeightGrid::Explicit(vec![1e-9])).unwrap();
        let e = detect_parabola(&table, Tolerance::Auto).unwrap_err();
        assert_eq!(e.name(), "InsufficientSpread");
    }

    #[test]
    fn reconstruct_vertex_parabola() {
        let c = CurveModel::parabola(0.0, 1.0).unwrap();
        let g = canonical_graph(&c, PointOnCurve::Param(0.0)).unwrap();
        let r = reconstruct_parabola(&g).unwrap();
        assert!(r.coefficients.a.abs() < 1e-12 && (r.coefficients.b - 1.0).abs() < 1e-12);
        assert!(r.is_parabola);
    }

    #[test]
    fn reconstruct_flags_the_circle() {
        let g = canonical_graph(&circle(), PointOnCurve::Param(0.0)).unwrap();
        let r = reconstruct_parabola(&g).unwrap();
        assert!(r.coefficients.a.abs() < 1e-12 && (r.coefficients.b - 1.0).abs() < 1e-12);
        assert_eq!(r.status(), "NotAParabola");
    }

    #[test]
    fn world_implicit_vanishes_on_the_curve() {
        let c = CurveModel::parabola(1.0, 2.0)
            .unwrap()
            .transformed(crate::geom::Isometry::new(0.7, Point2::new(3.0, -1.0)));
        let g = canonical_graph(&c, PointOnCurve::Param(0.4)).unwrap();
        let r = reconstruct_parabola(&g).unwrap();
        let q = r.world_implicit;
        for u in [-2.0, 0.0, 1.5] {
            let w = c.point(u).unwrap();
            let v = q[0] * w.x * w.x + q[1] * w.x * w.y + q[2] * w.y * w.y + q[3] * w.x + q[4] * w.y + q[5];
            assert!(v.abs() < 1e-8, "{v}");
        }
    }

    #[test]
    fn ode_residuals() {
        let c = CurveModel::parabola(0.0, 1.0).unwrap();
        let g = canonical_graph(&c, PointOnCurve::Param(0.0)).unwrap();
        let ts = linspace(0.1, 1.0, 10);
        let r = graph_ode_residuals(&g, &ts).unwrap();
        assert!(r.tangent_ode < 1e-12 && r.slope_relation < 1e-12);
        let g = canonical_graph(&circle(), PointOnCurve::Param(0.0)).unwrap();
        let r = graph_ode_residuals(&g, &[0.5]).unwrap();
        // Oracle: both sides of the tangent equation for 1 − √(1 − t²).
        let t: f64 = 0.5;
        let w = (1.0 - t * t).sqrt();
        let (f, f1, f2) = (1.0 - w, t / w, 1.0 / (w * w * w));
        let want = (2.0 * f * f * f2 - f1 * f1 * (t * f1 - f)).abs();
        assert!((r.tangent_ode - want).abs() < 1e-12 && want > 1e-3);
        assert_eq!(
            graph_ode_residuals(&g, &[0.0, 0.5]).unwrap_err().name(),
            "SingularAtOrigin"
        );
    }

    #[test]
    fn euler_exact_family() {
        let s: Vec<(f64, f64)> = (0..6)
            .map(|k| 0.1 * 4f64.powi(-k))
            .map(|h| (h, 3.0 * h.sqrt()))
            .collect();
        let f = euler_fit(&s).unwrap();
        assert!((f.c1 - 3.0).abs() < 1e-12 && f.c2.abs() < 1e-12 && f.residual < 1e-10);
    }

    #[test]
    fn power_law_exact() {
        let s: Vec<(f64, f64)> = [0.01, 0.1, 1.0, 10.0].iter().map(|&b| (b, 5.0 * b * b)).collect();
        let p = power_law_fit(&s).unwrap();
        assert!((p.lambda - 5.0).abs() < 1e-12 && (p.mu - 2.0).abs() < 1e-12);
        assert_eq!(power_law_fit(&s[..2]).unwrap_err().name(), "InsufficientSpread");
        assert_eq!(
            power_law_fit(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).unwrap_err().name(),
            "InsufficientSpread"
        );
        assert_eq!(
            power_law_fit(&[(1.0, -1.0), (10.0, 1.0), (1e3, 1.0)])
                .unwrap_err()
                .name(),
            "NonPositiveSample"
        );
    }
}
