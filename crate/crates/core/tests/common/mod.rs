#![allow(dead_code)]

use chordlab::curve::{Catenary, CurveModel, Polynomial};
use chordlab::geom::{Isometry, Point2};
use chordlab::ingest::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn circle() -> CurveModel {
    CurveModel::circle(1.0).unwrap()
}

pub fn ellipse() -> CurveModel {
    CurveModel::ellipse(2.0, 1.0).unwrap()
}

pub fn cosh() -> CurveModel {
    CurveModel::graph(Catenary { c: 1.0 }, -3.0, 3.0).unwrap()
}

/// `x²/2 + x⁴/12`, convex with `f'' = 1 + x²`.
pub fn quartic() -> CurveModel {
    CurveModel::graph(Polynomial::new(vec![0.0, 0.0, 0.5, 0.0, 1.0 / 12.0]), -2.0, 2.0).unwrap()
}

/// The non-parabolic analytic test models.
pub fn non_parabolas() -> Vec<CurveModel> {
    vec![circle(), ellipse(), cosh(), quartic()]
}

/// Five analytic models, one of them a tilted parabola.
pub fn analytic_models() -> Vec<CurveModel> {
    let mut v = vec![CurveModel::parabola(0.7, 1.5).unwrap()];
    v.extend(non_parabolas());
    v
}

/// `(a, b)` with `a ∈ [−3, 3]`, `b ∈ [0.1, 10]` (log-uniform).
pub fn random_parabola_params(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a = rng.random_range(-3.0..3.0);
    let b = 10f64.powf(rng.random_range(-1.0..1.0));
    (a, b)
}

pub fn random_motion(rng: &mut ChaCha8Rng) -> Isometry {
    Isometry::new(
        rng.random_range(-3.1..3.1),
        Point2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)),
    )
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// 200 samples of a test shape under `motion`, with uniform noise of the
/// given amplitude added to both coordinates.
pub fn cloud(kind: &str, motion: Isometry, noise: f64, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let pts = (0..200)
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / 199.0;
            let p = match kind {
                "parabola" => Point2::new(s, 0.5 * s * s),
                "circle" => Point2::new((1.2 * s).sin(), 1.0 - (1.2 * s).cos()),
                "ellipse" => Point2::new((1.2 * s).sin(), 2.0 * (1.0 - (1.2 * s).cos())),
                _ => panic!("unknown shape {kind}"),
            };
            let q = motion.apply(p);
            Point2::new(
                q.x + noise * r.random_range(-1.0..1.0),
                q.y + noise * r.random_range(-1.0..1.0),
            )
        })
        .collect();
    PointCloud::new(pts, kind).unwrap()
}

pub fn cloud_csv(cloud: &PointCloud) -> String {
    let mut s = String::from("x,y\n");
    for p in &cloud.points {
        s.push_str(&format!("{:?},{:?}\n", p.x, p.y));
    }
    s
}
