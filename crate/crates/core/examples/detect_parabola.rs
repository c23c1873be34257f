//! Runs the parabola detector on a tilted, moved parabola and on an ellipse.

use chordlab::characterize::{detect_parabola, ratio_profile, HeightGrid, Tolerance};
use chordlab::{CurveModel, Isometry, Point2};

fn main() -> chordlab::Result<()> {
    let grid = HeightGrid::Relative {
        fraction: 0.5,
        levels: 5,
    };
    let parabola = CurveModel::parabola(1.0, 2.0)?.transformed(Isometry::new(0.8, Point2::new(2.0, -1.0)));
    for curve in [parabola, CurveModel::ellipse(2.0, 1.0)?] {
        let table = ratio_profile(&curve, &curve.default_points(5), &grid)?;
        let v = detect_parabola(&table, Tolerance::Auto)?;
        println!(
            "{}: is_parabola = {} at tolerance {:.0e}",
            curve.label(),
            v.is_parabola,
            v.tolerance
        );
        for f in &v.families {
            println!(
                "  {:<6} max |ratio - {:.6}| = {:.3e}",
                f.family, f.target, f.max_deviation
            );
        }
    }
    Ok(())
}
