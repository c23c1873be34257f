//! Sampled curves: CSV point clouds and locally fitted quartic models.

use crate::curve::{CurveModel, LocalGraph, PointOnCurve};
use crate::error::{Error, Result};
use crate::geom::{Frame, Isometry, Point2};
use crate::numeric::weighted_fit;
use nalgebra::DMatrix;
use std::io::Read;
use std::sync::Arc;

/// Smallest cloud admitting one degree-4 window.
pub const MIN_POINTS: usize = 7;
/// Samples required on each side of a base point.
const MIN_SIDE: usize = 3;
/// Refits after the initial one; each re-centres and re-rotates the frame.
const REFITS: usize = 2;
/// Cap on the number of windows sampled for the noise estimate.
const NOISE_PROBES: usize = 200;

/// An ordered list of plane samples along a simple arc.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point2>,
    pub source: String,
}

impl PointCloud {
    pub fn new(points: Vec<Point2>, source: impl Into<String>) -> Result<Self> {
        if points.len() < MIN_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_POINTS,
                got: points.len(),
            });
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint { index: i });
        }
        Ok(PointCloud {
            points,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Parses `x,y` lines. A non-numeric first line is taken as a header; blank
/// lines and lines starting with `#` are skipped.
pub fn load_points<R: Read>(mut source: R) -> Result<PointCloud> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| Error::ParseError {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    parse_points(&text, "stream")
}

pub fn parse_points(text: &str, source: &str) -> Result<PointCloud> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::ParseError {
            line: e.position().map_or(0, |p| p.line() as usize),
            column: 0,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<Option<f64>> = record
            .iter()
            .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        if line == 1 && parsed.iter().any(Option::is_none) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::ParseError {
                line,
                column: record.len().min(2) + 1,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        if let Some(col) = parsed.iter().position(Option::is_none) {
            return Err(Error::ParseError {
                line,
                column: col + 1,
                message: format!("'{}' is not a finite number", &record[col]),
            });
        }
        points.push(Point2::new(parsed[0].unwrap(), parsed[1].unwrap()));
    }
    PointCloud::new(points, source)
}

/// One local quartic fit.
#[derive(Debug, Clone)]
pub struct LocalFit {
    /// Frame at the fitted foot point, tangent from the fit.
    pub frame: Frame,
    /// `c2, c3, c4` of `f(x) = c2 x² + c3 x³ + c4 x⁴`.
    pub coefficients: [f64; 3],
    /// Residual RMS of the final fit (degrees-of-freedom corrected).
    pub rms: f64,
    /// Frame-abscissa extent of the samples in the window.
    pub x_lo: f64,
    pub x_hi: f64,
    /// Standard error of `f'''(0)` implied by `rms`.
    pub third_error: f64,
    /// Change in `f''(0)` per unit of sample noise.
    pub curvature_sensitivity: f64,
    /// Distance from the query point to the fitted curve.
    pub offset: f64,
    pub center_index: usize,
}

/// A sampled curve with per-query weighted quartic fits.
#[derive(Debug, Clone)]
pub struct LocalFitModel {
    cloud: Arc<PointCloud>,
    window: usize,
    noise: f64,
    model_rms: f64,
    scale: f64,
}

/// Fits a sampled curve model to an ordered point cloud.
pub fn fit_local_model(cloud: &PointCloud, window: usize) -> Result<CurveModel> {
    Ok(CurveModel::sampled(Arc::new(LocalFitModel::new(cloud, window)?)))
}

impl LocalFitModel {
    pub fn new(cloud: &PointCloud, window: usize) -> Result<Self> {
        if window < MIN_SIDE {
            return Err(Error::BadParameter(format!(
                "window {window} must be at least {MIN_SIDE}"
            )));
        }
        let needed = 2 * window + 1;
        if needed > cloud.len() {
            return Err(Error::WindowTooLarge {
                window,
                needed,
                available: cloud.len(),
            });
        }
        let pts = &cloud.points;
        let mut sign = 0.0;
        for i in 1..pts.len() - 1 {
            let turn = (pts[i] - pts[i - 1]).cross(pts[i + 1] - pts[i]);
            if turn == 0.0 || (sign != 0.0 && turn.signum() != sign) {
                return Err(Error::NotConvex { index: i });
            }
            sign = turn.signum();
        }
        let mut oriented = cloud.clone();
        if sign < 0.0 {
            oriented.points.reverse();
        }
        let (mut lo, mut hi) = (oriented.points[0], oriented.points[0]);
        for p in &oriented.points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let mut model = LocalFitModel {
            cloud: Arc::new(oriented),
            window,
            noise: 0.0,
            model_rms: 0.0,
            scale: (hi - lo).norm(),
        };
        model.noise = model.median_rms(MIN_SIDE)?;
        model.model_rms = model.median_rms(window)?;
        Ok(model)
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Median residual RMS of the smallest (half-width 3) windows, where
    /// the quartic misfit is negligible next to measurement noise.
    pub fn noise_estimate(&self) -> f64 {
        self.noise
    }

    /// Median residual RMS of fits at the model's own window.
    pub fn model_rms(&self) -> f64 {
        self.model_rms
    }

    /// Part of [`model_rms`](Self::model_rms) not explained by noise: the
    /// quartic's systematic misfit at this window.
    pub fn misfit_estimate(&self) -> f64 {
        (self.model_rms * self.model_rms - self.noise * self.noise)
            .max(0.0)
            .sqrt()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Sample indices whose windows are symmetric.
    pub fn interior_indices(&self) -> std::ops::RangeInclusive<usize> {
        self.window..=self.cloud.len() - 1 - self.window
    }

    pub(crate) fn transformed(&self, motion: Isometry) -> LocalFitModel {
        let points = self.cloud.points.iter().map(|p| motion.apply(*p)).collect();
        LocalFitModel {
            cloud: Arc::new(PointCloud {
                points,
                source: self.cloud.source.clone(),
            }),
            window: self.window,
            noise: self.noise,
            model_rms: self.model_rms,
            scale: self.scale,
        }
    }

    fn median_rms(&self, half: usize) -> Result<f64> {
        let range = half..=self.cloud.len() - 1 - half;
        let count = range.end() - range.start() + 1;
        let stride = count.div_ceil(NOISE_PROBES).max(1);
        let mut rms: Vec<f64> = range
            .step_by(stride)
            .map(|i| self.fit_window(i, self.cloud.points[i], half).map(|f| f.rms))
            .collect::<Result<_>>()?;
        rms.sort_by(f64::total_cmp);
        Ok(rms[rms.len() / 2])
    }

    fn nearest_index(&self, q: Point2) -> usize {
        self.cloud
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.distance(q).total_cmp(&b.1.distance(q)))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Local fit around the sample nearest to `q`.
    pub fn fit_near(&self, q: Point2) -> Result<LocalFit> {
        self.fit_at_index(self.nearest_index(q), q)
    }

    /// Local fit centred on sample `i`.
    pub fn fit_at_sample(&self, i: usize) -> Result<LocalFit> {
        let p = *self.cloud.points.get(i).ok_or_else(|| {
            Error::BadParameter(format!(
                "sample index {i} out of range (cloud has {})",
                self.cloud.len()
            ))
        })?;
        self.fit_at_index(i, p)
    }

    /// Uncertainty of the fitted curvature at sample `i` implied by the
    /// larger of the noise and misfit estimates.
    pub fn curvature_error(&self, i: usize) -> Result<f64> {
        Ok(self.noise.max(self.misfit_estimate()) * self.fit_at_sample(i)?.curvature_sensitivity)
    }

    fn fit_at_index(&self, i: usize, q: Point2) -> Result<LocalFit> {
        self.fit_window(i, q, self.window)
    }

    fn fit_window(&self, i: usize, q: Point2, half: usize) -> Result<LocalFit> {
        let pts = &self.cloud.points;
        let n = pts.len();
        let size = 2 * half + 1;
        let start = i.saturating_sub(half).min(n - size);
        let window = &pts[start..start + size];
        if i - start < MIN_SIDE || start + size - 1 - i < MIN_SIDE {
            return Err(Error::WindowTooSmall(format!(
                "sample {i} has fewer than {MIN_SIDE} neighbours on one side"
            )));
        }
        let tangent = pts[(i + 1).min(n - 1)] - pts[i.saturating_sub(1)];
        let mut frame = Frame::new(q, tangent);
        let mut offset = None;
        let mut result = None;
        for pass in 0..=REFITS {
            let fit = quartic_fit(&frame, window, half)?;
            let c = &fit.coefficients;
            if offset.is_none() {
                offset = Some(c[0].abs());
            }
            if pass == REFITS {
                result = Some(fit);
                break;
            }
            let origin = frame.to_world(Point2::new(0.0, c[0]));
            let dir = frame.vector_to_world(Point2::new(1.0, c[1]));
            frame = Frame::new(origin, dir);
        }
        let fit = result.expect("final pass always sets the result");
        let c = fit.coefficients;
        Ok(LocalFit {
            frame,
            coefficients: [c[2], c[3], c[4]],
            rms: fit.rms,
            x_lo: fit.x_lo,
            x_hi: fit.x_hi,
            third_error: 6.0 * fit.rms * fit.c3_sensitivity,
            curvature_sensitivity: 2.0 * fit.c2_sensitivity,
            offset: offset.unwrap_or(0.0),
            center_index: i,
        })
    }

    /// Canonical local graph at a sample or near a world position.
    pub fn local_graph(&self, at: PointOnCurve) -> Result<LocalGraph> {
        let fit = match at {
            PointOnCurve::Sample(i) => {
                if i >= self.cloud.len() {
                    return Err(Error::BadParameter(format!(
                        "sample index {i} out of range (cloud has {})",
                        self.cloud.len()
                    )));
                }
                self.fit_at_index(i, self.cloud.points[i])?
            }
            PointOnCurve::Point(p) => {
                let fit = self.fit_near(p)?;
                let tol = (1e-9 * (1.0 + self.scale)).max(10.0 * self.noise);
                if fit.offset > tol {
                    return Err(Error::OffCurve {
                        x: p.x,
                        y: p.y,
                        distance: fit.offset,
                    });
                }
                fit
            }
            PointOnCurve::Param(_) => {
                return Err(Error::BadParameter(
                    "sampled curves are addressed by sample index or position".into(),
                ))
            }
        };
        LocalGraph::from_quartic(
            fit.frame,
            fit.coefficients,
            fit.x_lo,
            fit.x_hi,
            self.scale,
            fit.third_error,
        )
    }
}

struct RawFit {
    coefficients: [f64; 5],
    rms: f64,
    x_lo: f64,
    x_hi: f64,
    /// sqrt of the (2,2) and (3,3) entries of (AᵀWA)⁻¹ in unscaled units.
    c2_sensitivity: f64,
    c3_sensitivity: f64,
}

/// Tricube-weighted quartic least squares in `frame`.
fn quartic_fit(frame: &Frame, window: &[Point2], half: usize) -> Result<RawFit> {
    let local: Vec<Point2> = window.iter().map(|p| frame.to_local(*p)).collect();
    let reach = local.iter().fold(0.0f64, |m, p| m.max(p.x.abs()));
    let cutoff = reach * (1.0 + 1.0 / half as f64);
    let weights: Vec<f64> = local
        .iter()
        .map(|p| (1.0 - (p.x.abs() / cutoff).powi(3)).powi(3))
        .collect();
    let design: Vec<Vec<f64>> = local
        .iter()
        .map(|p| {
            let z = p.x / reach;
            vec![1.0, z, z * z, z * z * z, z * z * z * z]
        })
        .collect();
    let y: Vec<f64> = local.iter().map(|p| p.y).collect();
    let fit = weighted_fit(&design, &y, Some(&weights))?;
    let mut coefficients = [0.0; 5];
    for (k, c) in coefficients.iter_mut().enumerate() {
        *c = fit.coefficients[k] / reach.powi(k as i32);
    }

    let mut normal = DMatrix::<f64>::zeros(5, 5);
    for (row, w) in design.iter().zip(&weights) {
        for a in 0..5 {
            for b in 0..5 {
                normal[(a, b)] += w * row[a] * row[b];
            }
        }
    }
    let (c2_sensitivity, c3_sensitivity) = normal
        .try_inverse()
        .map(|inv| {
            (
                inv[(2, 2)].max(0.0).sqrt() / (reach * reach),
                inv[(3, 3)].max(0.0).sqrt() / reach.powi(3),
            )
        })
        .unwrap_or((f64::INFINITY, f64::INFINITY));

    let (x_lo, x_hi) = local
        .iter()
        .fold((0.0f64, 0.0f64), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    Ok(RawFit {
        coefficients,
        rms: fit.rms(),
        x_lo,
        x_hi,
        c2_sensitivity,
        c3_sensitivity,
    })
}
