//! Recovers the parabola x^2 - 2axy + a^2y^2 - 2by = 0 through a point from
//! the second and third derivatives of the local graph.

use chordlab::characterize::reconstruct_parabola;
use chordlab::{canonical_graph, CurveModel, PointOnCurve};

fn main() -> chordlab::Result<()> {
    for curve in [CurveModel::parabola(1.5, 0.5)?, CurveModel::circle(1.0)?] {
        let g = canonical_graph(&curve, PointOnCurve::Param(0.0))?;
        let rec = reconstruct_parabola(&g)?;
        println!(
            "{}: a = {:.12}, b = {:.12}, residual {:.2e} (threshold {:.0e}) -> {}",
            curve.label(),
            rec.coefficients.a,
            rec.coefficients.b,
            rec.residual,
            rec.threshold,
            rec.status()
        );
    }
    Ok(())
}
