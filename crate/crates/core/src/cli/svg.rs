//! Static SVG drawing of one figure.

use crate::construction::Figure;
use crate::curve::LocalGraph;
use crate::geom::Point2;
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 40.0;
const ARC_POINTS: usize = 200;

/// Curve arc (a little beyond the chord), chord, the three tangents, and
/// the six labelled points.
pub fn figure_svg(g: &LocalGraph, fig: &Figure) -> String {
    let (lo, hi) = g.chart_range();
    let d0 = (1.25 * fig.chord.delta_s).max(lo);
    let d1 = (1.25 * fig.chord.delta_t).min(hi);
    let arc: Vec<Point2> = (0..=ARC_POINTS)
        .map(|k| {
            let d = d0 + (d1 - d0) * k as f64 / ARC_POINTS as f64;
            let c = g.chart_point(d);
            fig.frame.to_world(Point2::new(c.x, c.y))
        })
        .collect();
    let w = fig.world();
    let labelled = [
        ("A", w.a),
        ("A\u{2081}", w.a1),
        ("A\u{2082}", w.a2),
        ("B", w.b),
        ("B\u{2081}", w.b1),
        ("B\u{2082}", w.b2),
    ];
    let (mut min, mut max) = (arc[0], arc[0]);
    for p in arc.iter().chain(labelled.iter().map(|(_, p)| p)) {
        min = Point2::new(min.x.min(p.x), min.y.min(p.y));
        max = Point2::new(max.x.max(p.x), max.y.max(p.y));
    }
    let span = (max.x - min.x).max(max.y - min.y).max(f64::MIN_POSITIVE);
    let scale = (WIDTH - 2.0 * MARGIN) / span;
    let height = (max.y - min.y) * scale + 2.0 * MARGIN;
    // y grows downwards in SVG
    let map = |p: Point2| ((p.x - min.x) * scale + MARGIN, (max.y - p.y) * scale + MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.3} {height:.3}">"#
    )
    .unwrap();
    let mut d = String::new();
    for (k, p) in arc.iter().enumerate() {
        let (x, y) = map(*p);
        write!(d, "{}{x:.3},{y:.3}", if k == 0 { "M" } else { " L" }).unwrap();
    }
    writeln!(s, r#"  <path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#).unwrap();
    let segments = [
        ("chord", w.a1, w.a2, "steelblue"),
        ("tangent-P", w.b1, w.b2, "firebrick"),
        ("tangent-A1", w.b, w.a1, "firebrick"),
        ("tangent-A2", w.b, w.a2, "firebrick"),
    ];
    for (class, p, q, color) in segments {
        let (x1, y1) = map(p);
        let (x2, y2) = map(q);
        writeln!(
            s,
            r#"  <line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="1"/>"#
        )
        .unwrap();
    }
    for (label, p) in labelled {
        let (x, y) = map(p);
        writeln!(s, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#).unwrap();
        writeln!(
            s,
            r#"  <text x="{:.3}" y="{:.3}" font-family="serif" font-size="14">{label}</text>"#,
            x + 5.0,
            y - 5.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
