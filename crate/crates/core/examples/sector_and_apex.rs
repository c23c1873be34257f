//! Sector area by quadrature, and the apex of a chord: the point where the
//! tangent is parallel to the chord.

use chordlab::construction::{apex_for_chord, sector_area, sector_tolerance};
use chordlab::{canonical_graph, CurveModel, PointOnCurve};

fn main() -> chordlab::Result<()> {
    let ellipse = CurveModel::ellipse(2.0, 1.0)?;
    let g = canonical_graph(&ellipse, PointOnCurve::Param(0.4))?;
    for h in [0.2, 0.05, 0.0125] {
        let s = sector_area(&g, h, sector_tolerance(h, 1.0))?;
        println!("h = {h:<7} S = {s:.12}  S/h^1.5 = {:.9}", s / h.powf(1.5));
    }

    let a1 = ellipse.point(-0.6)?;
    let a2 = ellipse.point(0.9)?;
    let p = apex_for_chord(&ellipse, a1, a2)?;
    println!(
        "apex of chord ({:.4}, {:.4})-({:.4}, {:.4}) is ({:.9}, {:.9})",
        a1.x, a1.y, a2.x, a2.y, p.x, p.y
    );
    Ok(())
}
