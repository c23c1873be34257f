//! Strictly convex plane curve models and the canonical local-graph frame.
//!
//! Every analytic model is a regular parametrization `X(u)` oriented so that
//! `X' × X'' > 0`; the convex-side normal is then the counter-clockwise
//! quarter turn of the tangent. Near a base point `P = X(u0)` the curve is
//! re-expressed in the frame whose origin is `P` and whose x-axis is the
//! tangent there, as the graph `y = f(x)` with `f(0) = f'(0) = 0`.
//!
//! Displacements `X(u0 + d) - X(u0)` are evaluated with closed-form
//! difference identities rather than by subtracting two positions, so the
//! frame height `y` of a nearby point keeps full relative precision even
//! when `P` is far from the model origin.

use crate::error::{Error, Result};
use crate::geom::{Frame, Isometry, Point2};
use crate::ingest::LocalFitModel;
use crate::numeric::{bisect, grow_bracket, linspace, newton_bisect};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Default half-span of the parabola parameter, in units of `b`.
pub const PARABOLA_PARAM_SPAN: f64 = 1e3;
/// Number of interior samples used to certify `f'' > 0` on a graph domain.
const CONVEXITY_SAMPLES: usize = 1001;

/// A convex function `f` on an open interval with derivatives up to order 3.
pub trait GraphFunction: Send + Sync + fmt::Debug {
    /// `[f, f', f'', f''']` at `x`.
    fn jet(&self, x: f64) -> [f64; 4];

    /// `f(x0 + d) - f(x0)`. Override with a cancellation-free form when one
    /// exists.
    fn increment(&self, x0: f64, d: f64) -> f64 {
        self.jet(x0 + d)[0] - self.jet(x0)[0]
    }

    /// `f'(x0 + d) - f'(x0)`.
    fn slope_increment(&self, x0: f64, d: f64) -> f64 {
        self.jet(x0 + d)[1] - self.jet(x0)[1]
    }

    fn describe(&self) -> String;
}

/// `c·(cosh(x/c) − 1)`, the catenary through the origin with κ(0) = 1/c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Catenary {
    pub c: f64,
}

impl GraphFunction for Catenary {
    fn jet(&self, x: f64) -> [f64; 4] {
        let z = x / self.c;
        let (sh, ch) = (z.sinh(), z.cosh());
        [self.c * (ch - 1.0), sh, ch / self.c, sh / (self.c * self.c)]
    }

    fn increment(&self, x0: f64, d: f64) -> f64 {
        // cosh(a) − cosh(b) = 2 sinh((a+b)/2) sinh((a−b)/2)
        let m = (x0 + 0.5 * d) / self.c;
        2.0 * self.c * m.sinh() * (0.5 * d / self.c).sinh()
    }

    fn slope_increment(&self, x0: f64, d: f64) -> f64 {
        let m = (x0 + 0.5 * d) / self.c;
        2.0 * m.cosh() * (0.5 * d / self.c).sinh()
    }

    fn describe(&self) -> String {
        format!("{}*(cosh(x/{}) - 1)", self.c, self.c)
    }
}

/// Polynomial `Σ c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Polynomial { coefficients }
    }

    /// Taylor coefficients about `x0` (repeated synthetic division).
    fn shifted(&self, x0: f64) -> Vec<f64> {
        let mut c = self.coefficients.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] += x0 * c[j + 1];
            }
        }
        c
    }

    fn eval_tail(c: &[f64], d: f64, from: usize) -> f64 {
        // Σ_{k ≥ from} c_k d^(k − from) … times d^from
        let mut acc = 0.0;
        for &ck in c[from..].iter().rev() {
            acc = acc * d + ck;
        }
        acc * d.powi(from as i32)
    }
}

impl GraphFunction for Polynomial {
    fn jet(&self, x: f64) -> [f64; 4] {
        // Horner with Taylor accumulators: p, p', p''/2, p'''/6.
        let mut t = [0.0; 4];
        for &ck in self.coefficients.iter().rev() {
            t[3] = t[3] * x + t[2];
            t[2] = t[2] * x + t[1];
            t[1] = t[1] * x + t[0];
            t[0] = t[0] * x + ck;
        }
        [t[0], t[1], 2.0 * t[2], 6.0 * t[3]]
    }

    fn increment(&self, x0: f64, d: f64) -> f64 {
        let c = self.shifted(x0);
        if c.len() < 2 {
            return 0.0;
        }
        Self::eval_tail(&c, d, 1)
    }

    fn slope_increment(&self, x0: f64, d: f64) -> f64 {
        let c = self.shifted(x0);
        if c.len() < 3 {
            return 0.0;
        }
        let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect();
        Self::eval_tail(&dc, d, 1)
    }

    fn describe(&self) -> String {
        format!("polynomial {:?}", self.coefficients)
    }
}

/// A graph function built from a closure returning `[f, f', f'', f''']`.
#[derive(Clone)]
pub struct FnGraph {
    label: String,
    f: Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>,
}

impl FnGraph {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> [f64; 4] + Send + Sync + 'static) -> Self {
        FnGraph {
            label: label.into(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnGraph").field("label", &self.label).finish()
    }
}

impl GraphFunction for FnGraph {
    fn jet(&self, x: f64) -> [f64; 4] {
        (self.f)(x)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Parameters accepted by [`make_curve`].
#[derive(Debug, Clone)]
pub enum CurveSpec {
    /// `(x − a·y)² = 2·b·y`, vertex-free canonical point at the origin with
    /// tangent along +x.
    Parabola { a: f64, b: f64 },
    /// Circle of radius `r` centred at `(0, r)`.
    Circle { r: f64 },
    /// Ellipse centred at `(0, p)` with semi-axis `q` along x and `p` along
    /// y; the bottom point is the origin and has curvature `p/q²`.
    Ellipse { p: f64, q: f64 },
    /// Graph `y = f(x)` of a convex function on the open interval `(lo, hi)`.
    Graph {
        f: Arc<dyn GraphFunction>,
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Parabola { a: f64, b: f64 },
    Ellipse { p: f64, q: f64 },
    Graph { f: Arc<dyn GraphFunction> },
    Sampled(Arc<LocalFitModel>),
}

/// Position and parameter derivatives up to order 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub p: Point2,
    pub d1: Point2,
    pub d2: Point2,
    pub d3: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamDomain {
    /// Open interval.
    Interval(f64, f64),
    /// Closed curve; the parameter is an angle.
    Periodic,
}

/// Where on a curve a base point sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointOnCurve {
    /// Model parameter (analytic curves).
    Param(f64),
    /// World position; must lie on the curve within the membership tolerance.
    Point(Point2),
    /// Index into the samples of a sampled curve.
    Sample(usize),
}

/// A strictly convex plane curve, analytic or sampled, in a rigid placement.
#[derive(Debug, Clone)]
pub struct CurveModel {
    pub(crate) shape: Shape,
    placement: Isometry,
    domain: ParamDomain,
    label: String,
}

/// Builds a curve model after checking its parameters and strict convexity.
pub fn make_curve(spec: CurveSpec) -> Result<CurveModel> {
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(Error::BadParameter(format!("{name} = {v} must be finite and positive")))
        }
    };
    match spec {
        CurveSpec::Parabola { a, b } => {
            positive("b", b)?;
            if !a.is_finite() {
                return Err(Error::BadParameter(format!("a = {a} must be finite")));
            }
            let span = PARABOLA_PARAM_SPAN * b;
            Ok(CurveModel {
                shape: Shape::Parabola { a, b },
                placement: Isometry::IDENTITY,
                domain: ParamDomain::Interval(-span, span),
                label: format!("parabola(a={a}, b={b})"),
            })
        }
        CurveSpec::Circle { r } => {
            positive("r", r)?;
            Ok(CurveModel {
                shape: Shape::Ellipse { p: r, q: r },
                placement: Isometry::IDENTITY,
                domain: ParamDomain::Periodic,
                label: format!("circle(r={r})"),
            })
        }
        CurveSpec::Ellipse { p, q } => {
            positive("p", p)?;
            positive("q", q)?;
            Ok(CurveModel {
                shape: Shape::Ellipse { p, q },
                placement: Isometry::IDENTITY,
                domain: ParamDomain::Periodic,
                label: format!("ellipse(p={p}, q={q})"),
            })
        }
        CurveSpec::Graph { f, lo, hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::BadParameter(format!("empty graph domain ({lo}, {hi})")));
            }
            // Interior sample points of the open interval.
            for i in 0..CONVEXITY_SAMPLES {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / CONVEXITY_SAMPLES as f64;
                let [_, d1, d2, _] = f.jet(x);
                let kappa = d2 / (1.0 + d1 * d1).powf(1.5);
                if !(kappa > 0.0) {
                    return Err(Error::NonConvex { at: x, kappa });
                }
            }
            let label = format!("graph({}) on ({lo}, {hi})", f.describe());
            Ok(CurveModel {
                shape: Shape::Graph { f },
                placement: Isometry::IDENTITY,
                domain: ParamDomain::Interval(lo, hi),
                label,
            })
        }
    }
}

impl CurveModel {
    pub fn parabola(a: f64, b: f64) -> Result<Self> {
        make_curve(CurveSpec::Parabola { a, b })
    }

    pub fn circle(r: f64) -> Result<Self> {
        make_curve(CurveSpec::Circle { r })
    }

    pub fn ellipse(p: f64, q: f64) -> Result<Self> {
        make_curve(CurveSpec::Ellipse { p, q })
    }

    pub fn graph(f: impl GraphFunction + 'static, lo: f64, hi: f64) -> Result<Self> {
        make_curve(CurveSpec::Graph { f: Arc::new(f), lo, hi })
    }

    pub(crate) fn sampled(model: Arc<LocalFitModel>) -> Self {
        let label = format!("sampled({} points, window {})", model.cloud().len(), model.window());
        CurveModel {
            shape: Shape::Sampled(model),
            placement: Isometry::IDENTITY,
            domain: ParamDomain::Interval(f64::NEG_INFINITY, f64::INFINITY),
            label,
        }
    }

    /// Same curve after an additional rigid motion.
    pub fn transformed(&self, motion: Isometry) -> CurveModel {
        match &self.shape {
            Shape::Sampled(m) => CurveModel::sampled(Arc::new(m.transformed(motion))),
            _ => CurveModel {
                shape: self.shape.clone(),
                placement: motion.compose(&self.placement),
                domain: self.domain,
                label: self.label.clone(),
            },
        }
    }

    /// Restricts the parameter interval (non-periodic models only).
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        match self.domain {
            ParamDomain::Interval(a, b) if lo >= a && hi <= b && lo < hi => {
                self.domain = ParamDomain::Interval(lo, hi);
                Ok(self)
            }
            _ => Err(Error::BadParameter(format!(
                "domain ({lo}, {hi}) is not a sub-interval"
            ))),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn placement(&self) -> Isometry {
        self.placement
    }

    pub fn domain(&self) -> ParamDomain {
        self.domain
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.shape, Shape::Sampled(_))
    }

    pub fn sampled_model(&self) -> Option<&LocalFitModel> {
        match &self.shape {
            Shape::Sampled(m) => Some(m),
            _ => None,
        }
    }

    /// Characteristic length used by tolerances.
    pub fn scale(&self) -> f64 {
        match &self.shape {
            Shape::Parabola { b, .. } => *b,
            Shape::Ellipse { p, q } => p.max(*q),
            Shape::Graph { .. } => 1.0,
            Shape::Sampled(m) => m.scale(),
        }
    }

    /// Absolute distance within which a point counts as lying on the curve.
    pub fn membership_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.scale())
    }

    /// Implicit conic `x² − 2a·x·y + a²·y² − 2b·y` of a parabola model, in
    /// model coordinates.
    pub fn conic_residual(&self, p: Point2) -> Option<f64> {
        match self.shape {
            Shape::Parabola { a, b } => {
                let m = self.placement.apply_inverse(p);
                Some(m.x * m.x - 2.0 * a * m.x * m.y + a * a * m.y * m.y - 2.0 * b * m.y)
            }
            _ => None,
        }
    }

    /// Model-space jet at parameter `u`.
    pub(crate) fn model_jet(&self, u: f64) -> Jet {
        match &self.shape {
            Shape::Parabola { a, b } => {
                let (a, b) = (*a, *b);
                Jet {
                    p: Point2::new(u + a * u * u / (2.0 * b), u * u / (2.0 * b)),
                    d1: Point2::new(1.0 + a * u / b, u / b),
                    d2: Point2::new(a / b, 1.0 / b),
                    d3: Point2::ORIGIN,
                }
            }
            Shape::Ellipse { p, q } => {
                let (s, c) = u.sin_cos();
                Jet {
                    p: Point2::new(q * s, p * (1.0 - c)),
                    d1: Point2::new(q * c, p * s),
                    d2: Point2::new(-q * s, p * c),
                    d3: Point2::new(-q * c, -p * s),
                }
            }
            Shape::Graph { f } => {
                let [y, d1, d2, d3] = f.jet(u);
                Jet {
                    p: Point2::new(u, y),
                    d1: Point2::new(1.0, d1),
                    d2: Point2::new(0.0, d2),
                    d3: Point2::new(0.0, d3),
                }
            }
            Shape::Sampled(_) => unreachable!("sampled curves have no global parametrization"),
        }
    }

    /// `(X(u0+d) − X(u0), X'(u0+d) − X'(u0))` in model coordinates, without
    /// subtractive cancellation.
    pub(crate) fn model_offset(&self, u0: f64, d: f64) -> (Point2, Point2) {
        match &self.shape {
            Shape::Parabola { a, b } => {
                let (a, b) = (*a, *b);
                let sum = 2.0 * u0 + d;
                let dy = d * sum / (2.0 * b);
                (Point2::new(d + a * dy, dy), Point2::new(a * d / b, d / b))
            }
            Shape::Ellipse { p, q } => {
                let m = u0 + 0.5 * d;
                let sh = 2.0 * (0.5 * d).sin();
                let (sm, cm) = m.sin_cos();
                (
                    Point2::new(q * cm * sh, p * sm * sh),
                    Point2::new(-q * sm * sh, p * cm * sh),
                )
            }
            Shape::Graph { f } => (
                Point2::new(d, f.increment(u0, d)),
                Point2::new(0.0, f.slope_increment(u0, d)),
            ),
            Shape::Sampled(_) => unreachable!("sampled curves have no global parametrization"),
        }
    }

    fn require_analytic(&self) -> Result<()> {
        if self.is_sampled() {
            Err(Error::BadParameter(
                "sampled curves are addressed by sample index or position, not by parameter".into(),
            ))
        } else {
            Ok(())
        }
    }

    fn check_param(&self, u: f64) -> Result<()> {
        self.require_analytic()?;
        match self.domain {
            ParamDomain::Interval(lo, hi) if !(u > lo && u < hi) => Err(Error::BadParameter(format!(
                "parameter {u} outside the open domain ({lo}, {hi})"
            ))),
            _ if !u.is_finite() => Err(Error::BadParameter(format!("parameter {u} is not finite"))),
            _ => Ok(()),
        }
    }

    /// World position at parameter `u`.
    pub fn point(&self, u: f64) -> Result<Point2> {
        self.check_param(u)?;
        Ok(self.placement.apply(self.model_jet(u).p))
    }

    /// World tangent (parameter derivative) at `u`.
    pub fn tangent(&self, u: f64) -> Result<Point2> {
        self.check_param(u)?;
        Ok(self.placement.rotate(self.model_jet(u).d1))
    }

    /// Signed curvature at parameter `u` (positive toward the convex side).
    pub fn curvature_param(&self, u: f64) -> Result<f64> {
        self.check_param(u)?;
        let j = self.model_jet(u);
        Ok(j.d1.cross(j.d2) / j.d1.norm().powi(3))
    }

    /// Parameter of a world point on an analytic curve.
    pub fn locate(&self, p: Point2) -> Result<f64> {
        self.require_analytic()?;
        if !p.is_finite() {
            return Err(Error::BadParameter("point is not finite".into()));
        }
        let m = self.placement.apply_inverse(p);
        let mut u = match &self.shape {
            Shape::Parabola { a, .. } => m.x - a * m.y,
            Shape::Ellipse { p: pa, q } => (m.x / q).atan2((pa - m.y) / pa),
            Shape::Graph { .. } => m.x,
            Shape::Sampled(_) => unreachable!(),
        };
        let clamp = |u: f64| match self.domain {
            ParamDomain::Interval(lo, hi) => {
                let eps = 1e-12 * (hi - lo).abs().max(1.0);
                u.clamp(lo + eps, hi - eps)
            }
            ParamDomain::Periodic => u,
        };
        u = clamp(u);
        // Orthogonal projection refinement.
        for _ in 0..4 {
            let j = self.model_jet(u);
            let r = j.p - m;
            let denom = j.d1.dot(j.d1) + r.dot(j.d2);
            if denom <= 0.0 {
                break;
            }
            u = clamp(u - r.dot(j.d1) / denom);
        }
        let distance = self.model_jet(u).p.distance(m);
        if distance > self.membership_tolerance() {
            return Err(Error::OffCurve {
                x: p.x,
                y: p.y,
                distance,
            });
        }
        Ok(match self.domain {
            ParamDomain::Periodic => (u + PI).rem_euclid(2.0 * PI) - PI,
            _ => u,
        })
    }

    /// `n` well-spread base-point parameters for profiling sweeps.
    pub fn default_point_params(&self, n: usize) -> Vec<f64> {
        match (&self.shape, self.domain) {
            (Shape::Parabola { b, .. }, _) => linspace(-b, *b, n),
            (Shape::Ellipse { .. }, _) => linspace(-PI / 2.0, PI / 2.0, n),
            (_, ParamDomain::Interval(lo, hi)) if lo.is_finite() && hi.is_finite() => {
                let w = hi - lo;
                linspace(lo + 0.25 * w, hi - 0.25 * w, n)
            }
            _ => linspace(-1.0, 1.0, n),
        }
    }

    /// `n` well-spread base points; sample indices for sampled curves.
    pub fn default_points(&self, n: usize) -> Vec<PointOnCurve> {
        if let Shape::Sampled(m) = &self.shape {
            let r = m.interior_indices();
            let (lo, hi) = (*r.start() as f64, *r.end() as f64);
            return linspace(lo, hi, n)
                .into_iter()
                .map(|i| PointOnCurve::Sample(i.round() as usize))
                .collect();
        }
        self.default_point_params(n)
            .into_iter()
            .map(PointOnCurve::Param)
            .collect()
    }

    /// Resolves a base-point specification to an analytic parameter.
    pub fn param_of(&self, at: PointOnCurve) -> Result<f64> {
        match at {
            PointOnCurve::Param(u) => {
                self.check_param(u)?;
                Ok(u)
            }
            PointOnCurve::Point(p) => self.locate(p),
            PointOnCurve::Sample(_) => {
                self.require_analytic()?;
                Err(Error::BadParameter("sample index given for an analytic curve".into()))
            }
        }
    }
}

/// Curvature at a base point with respect to the convex-side normal.
pub fn curvature_at(curve: &CurveModel, at: PointOnCurve) -> Result<f64> {
    if curve.is_sampled() {
        return Ok(canonical_graph(curve, at)?.curvature());
    }
    let u = curve.param_of(at)?;
    curve.curvature_param(u)
}

/// Derivatives of the chart `δ ↦ (x(δ), y(δ))` of a local graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    pub d2x: f64,
    pub d2y: f64,
    pub d3x: f64,
    pub d3y: f64,
}

impl ChartPoint {
    /// `f'` at this point.
    pub fn slope(&self) -> f64 {
        self.dy / self.dx
    }

    /// `f''` at this point.
    pub fn second(&self) -> f64 {
        (self.d2y * self.dx - self.dy * self.d2x) / self.dx.powi(3)
    }

    /// `f'''` at this point.
    pub fn third(&self) -> f64 {
        let n = self.d2y * self.dx - self.dy * self.d2x;
        let dn = self.d3y * self.dx - self.dy * self.d3x;
        (dn * self.dx - 3.0 * n * self.d2x) / self.dx.powi(5)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Chart {
    /// Analytic curve viewed from `X(u0)`; the chart parameter is `u − u0`.
    Parametric {
        curve: CurveModel,
        u0: f64,
        /// Unit tangent and normal at `u0`, model coordinates.
        t: Point2,
        n: Point2,
        speed: f64,
    },
    /// Explicit quartic `f(x) = c2 x² + c3 x³ + c4 x⁴`; the chart parameter
    /// is `x` itself.
    Quartic { c: [f64; 3] },
}

/// A curve near a base point `P`, written as `y = f(x)` in the canonical
/// frame (`P` at the origin, tangent along +x, convex side up).
#[derive(Debug, Clone)]
pub struct LocalGraph {
    pub(crate) frame: Frame,
    pub(crate) chart: Chart,
    /// Chart-parameter interval on which the chart is a strictly convex graph.
    pub(crate) delta_lo: f64,
    pub(crate) delta_hi: f64,
    height_limit: f64,
    curvature: f64,
    third: Option<f64>,
    scale: f64,
    /// Estimated error of the fitted third derivative (sampled models).
    pub(crate) third_error: Option<f64>,
}

impl LocalGraph {
    pub(crate) fn from_quartic(
        frame: Frame,
        c: [f64; 3],
        x_lo: f64,
        x_hi: f64,
        scale: f64,
        third_error: f64,
    ) -> Result<Self> {
        let mut g = LocalGraph {
            frame,
            chart: Chart::Quartic { c },
            delta_lo: x_lo,
            delta_hi: x_hi,
            height_limit: 0.0,
            curvature: 2.0 * c[0],
            third: Some(6.0 * c[1]),
            scale,
            third_error: Some(third_error),
        };
        if !(g.curvature > 0.0) {
            return Err(Error::NotConvex { index: 0 });
        }
        // Shrink to the largest interval around 0 where f'' > 0.
        let f2 = |x: f64| 2.0 * c[0] + 6.0 * c[1] * x + 12.0 * c[2] * x * x;
        for side in [-1.0, 1.0] {
            let end = if side < 0.0 { x_lo } else { x_hi };
            let steps = 256;
            let mut last_ok = 0.0;
            for i in 1..=steps {
                let x = end * i as f64 / steps as f64;
                if f2(x) <= 0.0 {
                    let root = bisect(f2, last_ok, x, 1e-15 * end.abs()).unwrap_or(last_ok);
                    let inner = root * (1.0 - 1e-9);
                    if side < 0.0 {
                        g.delta_lo = inner;
                    } else {
                        g.delta_hi = inner;
                    }
                    break;
                }
                last_ok = x;
            }
        }
        g.height_limit = g.chart_point(g.delta_lo).y.min(g.chart_point(g.delta_hi).y);
        Ok(g)
    }

    /// Frame in world coordinates.
    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// The base point `P` (world coordinates).
    pub fn base_point(&self) -> Point2 {
        self.frame.origin
    }

    /// `f''(0)`, equal to the curvature at `P`.
    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    /// `f'''(0)` when available.
    pub fn third_derivative(&self) -> Option<f64> {
        self.third
    }

    /// Estimated absolute error of `f'''(0)` for fitted graphs.
    pub fn third_derivative_error(&self) -> Option<f64> {
        self.third_error
    }

    /// Chord heights must lie strictly below this.
    pub fn height_limit(&self) -> f64 {
        self.height_limit
    }

    /// Smallest resolvable chord height.
    pub fn height_floor(&self) -> f64 {
        1e-14 * self.scale * self.scale * self.curvature
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Frame abscissa range of the working interval.
    pub fn x_range(&self) -> (f64, f64) {
        (self.chart_point(self.delta_lo).x, self.chart_point(self.delta_hi).x)
    }

    /// Chart-parameter range of the working interval.
    pub fn chart_range(&self) -> (f64, f64) {
        (self.delta_lo, self.delta_hi)
    }

    pub fn is_fitted(&self) -> bool {
        matches!(self.chart, Chart::Quartic { .. })
    }

    pub fn to_world(&self, local: Point2) -> Point2 {
        self.frame.to_world(local)
    }

    pub fn to_local(&self, world: Point2) -> Point2 {
        self.frame.to_local(world)
    }

    /// Chart evaluation at chart parameter `d`.
    pub fn chart_point(&self, d: f64) -> ChartPoint {
        match &self.chart {
            Chart::Parametric { curve, u0, t, n, speed } => {
                let (dp, dv) = curve.model_offset(*u0, d);
                let j = curve.model_jet(u0 + d);
                ChartPoint {
                    x: dp.dot(*t),
                    y: dp.dot(*n),
                    dx: speed + dv.dot(*t),
                    dy: dv.dot(*n),
                    d2x: j.d2.dot(*t),
                    d2y: j.d2.dot(*n),
                    d3x: j.d3.dot(*t),
                    d3y: j.d3.dot(*n),
                }
            }
            Chart::Quartic { c } => {
                let x = d;
                ChartPoint {
                    x,
                    y: x * x * (c[0] + x * (c[1] + x * c[2])),
                    dx: 1.0,
                    dy: x * (2.0 * c[0] + x * (3.0 * c[1] + x * 4.0 * c[2])),
                    d2x: 0.0,
                    d2y: 2.0 * c[0] + x * (6.0 * c[1] + x * 12.0 * c[2]),
                    d3x: 0.0,
                    d3y: 6.0 * c[1] + 24.0 * c[2] * x,
                }
            }
        }
    }

    /// Chart parameter at frame abscissa `x`.
    pub fn chart_param_at(&self, x: f64) -> Result<f64> {
        if let Chart::Quartic { .. } = self.chart {
            return if x >= self.delta_lo && x <= self.delta_hi {
                Ok(x)
            } else {
                Err(Error::HeightOutOfRange {
                    h: x,
                    limit: self.delta_hi,
                })
            };
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let (x_lo, x_hi) = self.x_range();
        if x < x_lo || x > x_hi {
            return Err(Error::BadParameter(format!(
                "abscissa {x} outside the local graph range ({x_lo}, {x_hi})"
            )));
        }
        let end = if x > 0.0 { self.delta_hi } else { self.delta_lo };
        newton_bisect(
            |d| {
                let c = self.chart_point(d);
                (c.x - x, c.dx)
            },
            0.0,
            end,
            0.0,
        )
    }

    /// `[f, f', f'']` at frame abscissa `x`.
    pub fn eval(&self, x: f64) -> Result<[f64; 3]> {
        let c = self.chart_point(self.chart_param_at(x)?);
        Ok([c.y, c.slope(), c.second()])
    }

    /// `f'''` at frame abscissa `x`.
    pub fn third_at(&self, x: f64) -> Result<f64> {
        Ok(self.chart_point(self.chart_param_at(x)?).third())
    }
}

/// Canonical local graph of `curve` at a base point.
pub fn canonical_graph(curve: &CurveModel, at: PointOnCurve) -> Result<LocalGraph> {
    if let Shape::Sampled(model) = &curve.shape {
        return model.local_graph(at);
    }
    let u0 = curve.param_of(at)?;
    let j0 = curve.model_jet(u0);
    let speed = j0.d1.norm();
    let t = j0.d1 * (1.0 / speed);
    let n = t.perp();
    let origin = curve.placement.apply(j0.p);
    let frame = Frame::new(origin, curve.placement.rotate(t));
    let mut g = LocalGraph {
        frame,
        chart: Chart::Parametric {
            curve: curve.clone(),
            u0,
            t,
            n,
            speed,
        },
        delta_lo: 0.0,
        delta_hi: 0.0,
        height_limit: 0.0,
        curvature: 0.0,
        third: None,
        scale: curve.scale(),
        third_error: None,
    };
    let c0 = g.chart_point(0.0);
    g.curvature = c0.second();
    g.third = Some(c0.third());

    // Domain limits expressed as chart offsets (kept strictly inside).
    let (lim_lo, lim_hi) = match curve.domain {
        ParamDomain::Interval(lo, hi) => {
            let pad = 1e-12 * (hi - lo).abs().clamp(1.0, 1e6);
            (lo - u0 + pad, hi - u0 - pad)
        }
        ParamDomain::Periodic => (-PI, PI),
    };
    // The chart stops being a graph where the tangent turns perpendicular
    // to the base tangent (dx = 0).
    let first_step = 1e-3 / (speed * g.curvature.max(1e-300)).max(1e-12);
    let mut ends = [0.0; 2];
    for (k, limit) in [lim_lo, lim_hi].into_iter().enumerate() {
        let folds = |d: f64| g.chart_point(d).dx <= 0.0;
        ends[k] = match grow_bracket(folds, 0.0, first_step.min(limit.abs()), limit) {
            Some((inner, outer)) => {
                let fold = bisect(|d| g.chart_point(d).dx, inner, outer, 0.0).unwrap_or(inner);
                // Back off so that slopes stay finite at the end of the range.
                fold * (1.0 - 1e-9)
            }
            None => limit,
        };
    }
    g.delta_lo = ends[0];
    g.delta_hi = ends[1];
    g.height_limit = g.chart_point(g.delta_lo).y.min(g.chart_point(g.delta_hi).y);
    Ok(g)
}
