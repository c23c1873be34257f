//! The chord/tangent figure at `(P, h)` and its lengths and areas.
//!
//! All construction happens in the canonical frame of a [`LocalGraph`]: `P`
//! is the origin, the base tangent is the x-axis and the chord is the line
//! `y = h`. The chord meets the curve at `A1 = (s, h)` and `A2 = (t, h)`,
//! `s < 0 < t`. The tangents there cross the x-axis at `B1`, `B2` and each
//! other at `B`.

use crate::curve::{canonical_graph, CurveModel, LocalGraph, ParamDomain, PointOnCurve};
use crate::error::{Error, Result};
use crate::geom::{triangle_area, Frame, Point2};
use crate::numeric::{adaptive_simpson, grow_bracket, newton_bisect, quad::DEFAULT_BUDGET};
use serde::Serialize;

/// Absolute sector-area tolerance used when the caller does not choose one.
pub const DEFAULT_SECTOR_TOL: f64 = 1e-10;

/// Sector tolerance scaled to the size of the figure: the absolute default,
/// tightened for small figures so that `S` keeps ~11 significant digits and
/// relaxed for very large ones to 13 digits, which double precision can reach.
pub fn sector_tolerance(h: f64, chord: f64) -> f64 {
    let size = h * chord;
    DEFAULT_SECTOR_TOL.min(1e-11 * size).max(1e-13 * size)
}

/// Where the line `y = h` meets the local graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub h: f64,
    /// Frame abscissas, `s < 0 < t`.
    pub s: f64,
    pub t: f64,
    /// `f'(s) < 0` and `f'(t) > 0`.
    pub slope_s: f64,
    pub slope_t: f64,
    /// Chart parameters of the two endpoints.
    pub(crate) delta_s: f64,
    pub(crate) delta_t: f64,
}

/// Solves `f(s) = f(t) = h` on either side of the base point.
pub fn chord(g: &LocalGraph, h: f64) -> Result<Chord> {
    let limit = g.height_limit();
    if !(h > g.height_floor() && h < limit) {
        return Err(Error::HeightOutOfRange { h, limit });
    }
    // Initial step from the osculating parabola, in chart units.
    let x_guess = (2.0 * h / g.curvature()).sqrt();
    let speed = g.chart_point(0.0).dx;
    let first = 0.5 * x_guess / speed;
    let mut ends = [(0.0, 0.0); 2];
    let (lo, hi) = g.chart_range();
    for (k, end) in [lo, hi].into_iter().enumerate() {
        let reached = |d: f64| g.chart_point(d).y >= h;
        let (inner, outer) =
            grow_bracket(reached, 0.0, first.min(end.abs()), end).ok_or(Error::HeightOutOfRange { h, limit })?;
        let d = newton_bisect(
            |d| {
                let c = g.chart_point(d);
                (c.y - h, c.dy)
            },
            inner,
            outer,
            0.0,
        )?;
        let c = g.chart_point(d);
        ends[k] = (d, c.x);
    }
    let (ds, dt) = (ends[0].0, ends[1].0);
    let cs = g.chart_point(ds);
    let ct = g.chart_point(dt);
    Ok(Chord {
        h,
        s: cs.x,
        t: ct.x,
        slope_s: cs.slope(),
        slope_t: ct.slope(),
        delta_s: ds,
        delta_t: dt,
    })
}

/// Chord endpoint abscissas `(s, t)` at height `h`.
pub fn chord_endpoints(g: &LocalGraph, h: f64) -> Result<(f64, f64)> {
    chord(g, h).map(|c| (c.s, c.t))
}

/// The six labelled points of the figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigurePoints {
    #[serde(rename = "A")]
    pub a: Point2,
    #[serde(rename = "A1")]
    pub a1: Point2,
    #[serde(rename = "A2")]
    pub a2: Point2,
    #[serde(rename = "B")]
    pub b: Point2,
    #[serde(rename = "B1")]
    pub b1: Point2,
    #[serde(rename = "B2")]
    pub b2: Point2,
}

/// Chord/tangent construction at one `(P, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub h: f64,
    pub chord: Chord,
    /// Points in the canonical frame.
    pub local: FigurePoints,
    pub frame: Frame,
}

impl Figure {
    /// Base point `P` in world coordinates.
    pub fn base_point(&self) -> Point2 {
        self.frame.origin
    }

    pub fn world(&self) -> FigurePoints {
        let w = |p: Point2| self.frame.to_world(p);
        let l = &self.local;
        FigurePoints {
            a: w(l.a),
            a1: w(l.a1),
            a2: w(l.a2),
            b: w(l.b),
            b1: w(l.b1),
            b2: w(l.b2),
        }
    }

    /// Area of the tangent triangle `B B1 B2` from the vertex coordinates.
    /// Kept as a cross-check of the value derived from `V − W`.
    pub fn tangent_triangle_area_direct(&self) -> f64 {
        triangle_area(self.local.b, self.local.b1, self.local.b2)
    }
}

/// Builds the figure on an existing local graph.
pub fn build_figure_in(g: &LocalGraph, h: f64) -> Result<Figure> {
    let ch = chord(g, h)?;
    let (s, t, fs, ft) = (ch.s, ch.t, ch.slope_s, ch.slope_t);
    if !(fs < 0.0 && ft > 0.0 && fs.is_finite() && ft.is_finite()) {
        return Err(Error::DegenerateFigure(format!(
            "tangent slopes f'(s) = {fs}, f'(t) = {ft} at h = {h}"
        )));
    }
    let b1 = Point2::new(s - h / fs, 0.0);
    let b2 = Point2::new(t - h / ft, 0.0);
    let x0 = (t * ft - s * fs) / (ft - fs);
    let y0 = ((t - s) * ft * fs + h * (ft - fs)) / (ft - fs);
    Ok(Figure {
        h,
        chord: ch,
        local: FigurePoints {
            a: Point2::ORIGIN,
            a1: Point2::new(s, h),
            a2: Point2::new(t, h),
            b: Point2::new(x0, y0),
            b1,
            b2,
        },
        frame: g.frame(),
    })
}

/// Builds the figure at base point `at` and height `h`.
pub fn build_figure(curve: &CurveModel, at: PointOnCurve, h: f64) -> Result<Figure> {
    build_figure_in(&canonical_graph(curve, at)?, h)
}

/// Lengths and areas of one figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measures {
    /// `|A1 A2|`
    #[serde(rename = "L")]
    pub l: f64,
    /// `|B1 B2|`
    pub ell: f64,
    /// Area of `A A1 A2`.
    #[serde(rename = "T")]
    pub t: f64,
    /// Area of `B B1 B2`.
    #[serde(rename = "U")]
    pub u: f64,
    /// Area of `B A1 A2`.
    #[serde(rename = "V")]
    pub v: f64,
    /// Area of the trapezoid `A1 A2 B2 B1`.
    #[serde(rename = "W")]
    pub w: f64,
    /// Area between the arc `A1 A2` and its chord.
    #[serde(rename = "S")]
    pub s: f64,
    /// `(1/f'(t) − 1/f'(s))·√h`, so that `ell = L − alpha·√h`.
    pub alpha: f64,
}

impl Measures {
    pub fn ratio_st(&self) -> f64 {
        self.s / self.t
    }
    pub fn ratio_sv(&self) -> f64 {
        self.s / self.v
    }
    pub fn ratio_sw(&self) -> f64 {
        self.s / self.w
    }
    pub fn ratio_ut(&self) -> f64 {
        self.u / self.t
    }
    pub fn ratio_ell_l(&self) -> f64 {
        self.ell / self.l
    }
}

/// Measures the figure given its sector area.
pub fn measure(fig: &Figure, sector: f64) -> Result<Measures> {
    let Chord {
        h,
        s,
        t,
        slope_s,
        slope_t,
        ..
    } = fig.chord;
    if slope_s == 0.0 || slope_t == 0.0 || !slope_s.is_finite() || !slope_t.is_finite() {
        return Err(Error::DegenerateFigure(format!(
            "vanishing or infinite tangent slope: f'(s) = {slope_s}, f'(t) = {slope_t}"
        )));
    }
    let l = t - s;
    // 1/f'(t) − 1/f'(s) > 0
    let k = 1.0 / slope_t - 1.0 / slope_s;
    let ell = l - k * h;
    let v = l * l / (2.0 * k);
    let w = h * l - 0.5 * k * h * h;
    Ok(Measures {
        l,
        ell,
        t: 0.5 * h * l,
        u: v - w,
        v,
        w,
        s: sector,
        alpha: k * h.sqrt(),
    })
}

/// `∫ (h − f(x)) dx` over the chord, evaluated along the chart.
pub fn sector_area_of(g: &LocalGraph, ch: &Chord, tol: f64) -> Result<f64> {
    let h = ch.h;
    let q = adaptive_simpson(
        |d| {
            let c = g.chart_point(d);
            (h - c.y) * c.dx
        },
        ch.delta_s,
        ch.delta_t,
        tol,
        DEFAULT_BUDGET,
    )?;
    Ok(q.value)
}

/// Area between the curve and the chord at height `h`.
pub fn sector_area(g: &LocalGraph, h: f64, tol: f64) -> Result<f64> {
    let ch = chord(g, h)?;
    sector_area_of(g, &ch, tol)
}

/// Figure, sector and measures in one step. `tol = None` picks
/// [`sector_tolerance`].
pub fn measure_at(g: &LocalGraph, h: f64, tol: Option<f64>) -> Result<(Figure, Measures)> {
    let fig = build_figure_in(g, h)?;
    let tol = tol.unwrap_or_else(|| sector_tolerance(h, fig.chord.t - fig.chord.s));
    let s = sector_area_of(g, &fig.chord, tol)?;
    let m = measure(&fig, s)?;
    Ok((fig, m))
}

/// Point of the arc between `A1` and `A2` whose tangent is parallel to the
/// chord `A1 A2`.
pub fn apex_for_chord(curve: &CurveModel, a1: Point2, a2: Point2) -> Result<Point2> {
    if a1.distance(a2) <= curve.membership_tolerance() {
        return Err(Error::NoApexInWindow("chord endpoints coincide".into()));
    }
    if curve.is_sampled() {
        let g = canonical_graph(curve, PointOnCurve::Point(a1))?;
        let (p, _) = apex_in_graph(&g, g.to_local(a2))?;
        return Ok(p);
    }
    let u1 = curve.locate(a1)?;
    let u2 = curve.locate(a2)?;
    let mut span = u2 - u1;
    if let ParamDomain::Periodic = curve.domain() {
        let tau = 2.0 * std::f64::consts::PI;
        span = (span + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI;
    }
    let dir = curve.placement().rotate_inverse(a2 - a1);
    let v1 = curve.model_jet(u1).d1;
    let d = newton_bisect(
        |d| {
            let (_, dv) = curve.model_offset(u1, d);
            let j = curve.model_jet(u1 + d);
            ((v1 + dv).cross(dir), j.d2.cross(dir))
        },
        0.0,
        span,
        0.0,
    )
    .map_err(|e| Error::NoApexInWindow(e.to_string()))?;
    let (dp, _) = curve.model_offset(u1, d);
    Ok(curve.placement().apply(curve.model_jet(u1).p + dp))
}

/// Solves `t·f'(x) = f(t)` for `x` strictly between `0` and `t`, where
/// `(t, f(t))` is the far chord endpoint in the frame of the graph (whose
/// origin is the near endpoint). Returns the apex in world and frame
/// coordinates.
pub fn apex_in_graph(g: &LocalGraph, far: Point2) -> Result<(Point2, Point2)> {
    if far.x == 0.0 {
        return Err(Error::NoApexInWindow("chord is vertical in the frame".into()));
    }
    let end = g
        .chart_param_at(far.x)
        .map_err(|_| Error::NoApexInWindow(format!("far endpoint x = {} outside the local graph", far.x)))?;
    let slope = far.y / far.x;
    let d = newton_bisect(
        |d| {
            let c = g.chart_point(d);
            (c.dy - slope * c.dx, c.d2y - slope * c.d2x)
        },
        0.0,
        end,
        0.0,
    )
    .map_err(|e| Error::NoApexInWindow(e.to_string()))?;
    let c = g.chart_point(d);
    let local = Point2::new(c.x, c.y);
    Ok((g.to_world(local), local))
}
