//! Extrapolates the scaled measures to h -> 0 and compares them with the
//! closed forms in the curvature.

use chordlab::asymptotics::{length_derivative_identity, verify_small_h_laws};
use chordlab::{CurveModel, PointOnCurve};

fn main() -> chordlab::Result<()> {
    let ellipse = CurveModel::ellipse(2.0, 1.0)?;
    let at = PointOnCurve::Param(0.0);
    let report = verify_small_h_laws(&ellipse, at, 0.05)?;
    println!("kappa = {}", report.kappa);
    for law in &report.laws {
        let e = &law.estimate;
        println!(
            "{:<12} limit {:.10}  closed form {:.10}  |diff| {:.1e}",
            law.name,
            e.extrapolated,
            e.theoretical.unwrap_or(f64::NAN),
            e.abs_error.unwrap_or(f64::NAN)
        );
    }
    println!("alpha        limit {:.10}", report.alpha.extrapolated);
    for h in [0.5, 0.1, 0.01] {
        println!(
            "h = {h}: |ell - (L - h dL/dh)| = {:.2e}",
            length_derivative_identity(&ellipse, at, h)?
        );
    }
    Ok(())
}
