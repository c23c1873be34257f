//! Builds the chord and tangent-triangle figure on a unit circle and prints
//! the eight measures.

use chordlab::{canonical_graph, make_curve, measure_at, CurveSpec, PointOnCurve};

fn main() -> chordlab::Result<()> {
    let circle = make_curve(CurveSpec::Circle { r: 1.0 })?;
    let g = canonical_graph(&circle, PointOnCurve::Param(0.0))?;
    let (fig, m) = measure_at(&g, 0.5, None)?;
    let w = fig.world();
    for (name, p) in [
        ("A", w.a),
        ("A1", w.a1),
        ("A2", w.a2),
        ("B", w.b),
        ("B1", w.b1),
        ("B2", w.b2),
    ] {
        println!("{name:>2} = ({:+.6}, {:+.6})", p.x, p.y);
    }
    println!("L = {:.9}  ell = {:.9}  alpha = {:.9}", m.l, m.ell, m.alpha);
    println!(
        "T = {:.9}  U = {:.9}  V = {:.9}  W = {:.9}  S = {:.9}",
        m.t, m.u, m.v, m.w, m.s
    );
    println!("U/T = {:.6} (1/2 on a parabola)", m.ratio_ut());
    Ok(())
}
