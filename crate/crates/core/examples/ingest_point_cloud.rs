//! Loads sampled points from CSV text, fits the local quartic model and runs
//! the detector on it.

use chordlab::characterize::{detect_parabola, ratio_profile, HeightGrid, Tolerance};
use chordlab::{canonical_graph, fit_local_model, parse_points, PointOnCurve};

fn main() -> chordlab::Result<()> {
    // A rotated parabola y = x^2/2, sampled at 200 points.
    let (c, s) = (0.6f64.cos(), 0.6f64.sin());
    let mut text = String::from("x,y\n");
    for i in 0..200 {
        let x = -1.0 + 2.0 * i as f64 / 199.0;
        let y = 0.5 * x * x;
        text.push_str(&format!("{},{}\n", c * x - s * y, s * x + c * y));
    }
    let cloud = parse_points(&text, "generated")?;
    let curve = fit_local_model(&cloud, 10)?;
    let model = curve.sampled_model().expect("sampled");
    println!(
        "{} points, noise estimate {:.2e}, misfit {:.2e}",
        cloud.len(),
        model.noise_estimate(),
        model.misfit_estimate()
    );

    let g = canonical_graph(&curve, PointOnCurve::Sample(100))?;
    println!("curvature at sample 100: {:.9}", g.curvature());

    let grid = HeightGrid::Relative {
        fraction: 0.5,
        levels: 5,
    };
    let table = ratio_profile(&curve, &curve.default_points(5), &grid)?;
    let v = detect_parabola(&table, Tolerance::Auto)?;
    println!(
        "is_parabola = {} at tolerance {:.2e} (worst family {})",
        v.is_parabola, v.tolerance, v.worst_family
    );
    Ok(())
}
