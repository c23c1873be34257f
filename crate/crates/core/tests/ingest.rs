mod common;

use chordlab::characterize::{detect_parabola, ratio_profile, HeightGrid, Tolerance};
use chordlab::curve::{canonical_graph, PointOnCurve};
use chordlab::ingest::{fit_local_model, load_points, PointCloud};
use chordlab::{Isometry, Point2};
use common::*;
use rand::Rng;

/// 201 samples of `y = x²/2` on `[−1, 1]`; sample 100 is the vertex.
fn vertex_cloud(noise: f64) -> PointCloud {
    let mut r = rng(21);
    let pts = (0..=200)
        .map(|i| {
            let x = -1.0 + i as f64 / 100.0;
            Point2::new(
                x + noise * r.random_range(-1.0..1.0),
                0.5 * x * x + noise * r.random_range(-1.0..1.0),
            )
        })
        .collect();
    PointCloud::new(pts, "vertex").unwrap()
}

fn verdict(cloud: &PointCloud) -> chordlab::characterize::Verdict {
    let curve = fit_local_model(cloud, 10).unwrap();
    let table = ratio_profile(
        &curve,
        &curve.default_points(5),
        &HeightGrid::Relative {
            fraction: 0.5,
            levels: 5,
        },
    )
    .unwrap();
    detect_parabola(&table, Tolerance::Auto).unwrap()
}

#[test]
fn exact_vertex_curvature() {
    let curve = fit_local_model(&vertex_cloud(0.0), 5).unwrap();
    let g = canonical_graph(&curve, PointOnCurve::Sample(100)).unwrap();
    assert!((g.curvature() - 1.0).abs() < 1e-8);
}

#[test]
fn noisy_vertex_curvature() {
    let curve = fit_local_model(&vertex_cloud(1e-6), 30).unwrap();
    let g = canonical_graph(&curve, PointOnCurve::Sample(100)).unwrap();
    assert!((g.curvature() - 1.0).abs() < 1e-4, "{}", g.curvature());
    // Uniform noise of amplitude 1e-6 has standard deviation 1e-6/√3.
    let noise = curve.sampled_model().unwrap().noise_estimate();
    assert!((0.2e-6..2e-6).contains(&noise), "{noise}");
}

#[test]
fn loads_a_generated_file() {
    let c = cloud("parabola", Isometry::new(0.4, Point2::new(1.0, -2.0)), 0.0, 1);
    let back = load_points(cloud_csv(&c).as_bytes()).unwrap();
    assert_eq!(back.len(), 200);
    assert_eq!(back.points, c.points);
}

#[test]
fn exact_parabola_clouds_are_parabolas() {
    let mut r = rng(2);
    for k in 0..4 {
        let v = verdict(&cloud("parabola", random_motion(&mut r), 0.0, k));
        assert!(v.is_parabola, "tol {} families {:?}", v.tolerance, v.families);
    }
}

#[test]
fn noisy_parabola_cloud_survives() {
    let mut r = rng(4);
    let v = verdict(&cloud("parabola", random_motion(&mut r), 1e-6, 8));
    assert!(v.is_parabola, "tol {} families {:?}", v.tolerance, v.families);
}

#[test]
fn circle_and_ellipse_clouds_are_not() {
    let mut r = rng(6);
    for kind in ["circle", "ellipse"] {
        let v = verdict(&cloud(kind, random_motion(&mut r), 0.0, 3));
        assert!(!v.is_parabola, "{kind}: tol {}", v.tolerance);
    }
}

/// Closed-form curvature of the generator shapes at parameter `s`.
fn generator_curvature(kind: &str, s: f64) -> f64 {
    match kind {
        "parabola" => (1.0 + s * s).powf(-1.5),
        "circle" => 1.0,
        "ellipse" => {
            let (dx, dy) = (1.2 * (1.2 * s).cos(), 2.4 * (1.2 * s).sin());
            let (ddx, ddy) = (-1.44 * (1.2 * s).sin(), 2.88 * (1.2 * s).cos());
            (dx * ddy - dy * ddx).abs() / (dx * dx + dy * dy).powf(1.5)
        }
        _ => unreachable!(),
    }
}

/// The fitted curvature error stays within ten times the noise estimate,
/// carried into curvature units by the fit's own sensitivity.
#[test]
fn curvature_matches_the_generator() {
    let mut r = rng(8);
    for noise in [0.0, 1e-6] {
        for window in [5, 10, 30] {
            for kind in ["parabola", "circle", "ellipse"] {
                let c = cloud(kind, random_motion(&mut r), noise, 5);
                let curve = fit_local_model(&c, window).unwrap();
                let model = curve.sampled_model().unwrap();
                for at in curve.default_points(7) {
                    let PointOnCurve::Sample(i) = at else { unreachable!() };
                    let s = -1.0 + 2.0 * i as f64 / 199.0;
                    let g = canonical_graph(&curve, at).unwrap();
                    let err = (g.curvature() - generator_curvature(kind, s)).abs();
                    let bound = 10.0 * model.curvature_error(i).unwrap();
                    assert!(
                        err < bound,
                        "{kind} w={window} noise={noise} i={i}: {err:e} vs {bound:e}"
                    );
                }
            }
        }
    }
}
