mod common;

use chordlab::asymptotics::{
    geometric_grid, law_targets, length_derivative_identity, length_derivative_residual, limit_estimate, small_h_laws,
    verify_small_h_laws, verify_small_h_laws_with, LAW_NAMES,
};
use chordlab::construction::measure_at;
use chordlab::curve::{canonical_graph, curvature_at, PointOnCurve};
use chordlab::ingest::fit_local_model;
use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn extrapolation_recovers_the_constant(
        c0 in -5.0..5.0f64,
        c1 in -5.0..5.0f64,
        c2 in -5.0..5.0f64,
        c3 in -5.0..5.0f64,
        log_h0 in -6.0..-4.0f64,
    ) {
        // Analytic in √h with a cubic term the fit basis does not contain.
        let q = |h: f64| c0 + c1 * h.sqrt() + c2 * h + c3 * h * h.sqrt();
        let samples: Vec<(f64, f64)> = geometric_grid(10f64.powf(log_h0), 6).into_iter().map(|h| (h, q(h))).collect();
        let e = limit_estimate(&samples).unwrap();
        prop_assert!((e.extrapolated - c0).abs() < 1e-8, "{} vs {c0}", e.extrapolated);
    }
}

#[test]
fn circle_length_limit_against_closed_form() {
    // L = 2√(2h − h²) on the unit circle.
    let samples: Vec<(f64, f64)> = geometric_grid(1e-2, 6)
        .into_iter()
        .map(|h| (h, 2.0 * (2.0 * h - h * h).sqrt() / h.sqrt()))
        .collect();
    let e = limit_estimate(&samples).unwrap();
    let oracle = 2.0 * (2.0 * 1e-8 - 1e-16f64).sqrt() / 1e-4;
    assert!((e.extrapolated - oracle).abs() < 1e-7);
    assert!((e.extrapolated - 8f64.sqrt()).abs() < 1e-8);
}

#[test]
fn law_coverage_and_refinement() {
    for curve in analytic_models() {
        for u in curve.default_point_params(5) {
            let g = canonical_graph(&curve, PointOnCurve::Param(u)).unwrap();
            let h0 = 0.1 * g.height_limit().min(10.0);
            let coarse = small_h_laws(&g, h0, 8).unwrap();
            let fine = small_h_laws(&g, h0, 10).unwrap();
            let pairs = coarse
                .laws
                .iter()
                .zip(&fine.laws)
                .map(|(c, f)| (c.name, &c.estimate, &f.estimate))
                .chain([("alpha", &coarse.alpha, &fine.alpha)]);
            for (name, c, f) in pairs {
                let (ec, ef) = (c.abs_error.unwrap(), f.abs_error.unwrap());
                assert!(ec < 1e-3, "{} u={u} {name}: {ec}", curve.label());
                // Errors already at round-off cannot shrink further.
                if ec > 1e-11 {
                    assert!(ef * 4.0 <= ec, "{} u={u} {name}: {ec} -> {ef}", curve.label());
                }
            }
        }
    }
}

#[test]
fn alpha_limit() {
    for curve in non_parabolas() {
        for u in curve.default_point_params(3) {
            let g = canonical_graph(&curve, PointOnCurve::Param(u)).unwrap();
            let r = small_h_laws(&g, 0.1 * g.height_limit().min(10.0), 8).unwrap();
            assert!(r.alpha.abs_error.unwrap() < 1e-3, "{} u={u}", curve.label());
        }
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn unit_circle_limits() {
    let want = [
        2.8284271, 1.4142136, 1.8856181, 1.4142136, 0.7071068, 2.8284271, 2.1213203,
    ];
    let r = verify_small_h_laws(&circle(), PointOnCurve::Param(0.0), 0.1).unwrap();
    assert_eq!(r.laws.len(), LAW_NAMES.len());
    for (law, w) in r.laws.iter().zip(want) {
        assert!((law.estimate.extrapolated - w).abs() < 1e-4, "{}", law.name);
    }
}

#[test]
fn parabola_scaled_values_are_constant() {
    let curve = chordlab::CurveModel::parabola(0.0, 1.0).unwrap();
    let r = verify_small_h_laws_with(&curve, PointOnCurve::Param(0.0), 0.5, 6).unwrap();
    for law in &r.laws {
        let target = law.estimate.theoretical.unwrap();
        for (h, q) in &law.estimate.samples {
            assert!(rel(*q, target) < 1e-9, "{} h={h}: {q}", law.name);
        }
    }
}

#[test]
fn ellipse_targets_scale_with_curvature() {
    let e = ellipse();
    let at = PointOnCurve::Param(0.0);
    // κ from a finite-difference oracle on the point evaluator.
    let d = 1e-4;
    let (p0, pp, pm) = (e.point(0.0).unwrap(), e.point(d).unwrap(), e.point(-d).unwrap());
    let (v, a) = ((pp - pm) * (0.5 / d), (pp + pm - p0 * 2.0) * (1.0 / (d * d)));
    let kappa_fd = v.cross(a).abs() / v.norm().powi(3);
    assert!((kappa_fd - 2.0).abs() < 1e-6);
    assert!((curvature_at(&e, at).unwrap() - 2.0).abs() < 1e-12);
    let r = verify_small_h_laws(&e, at, 0.05).unwrap();
    for (law, t) in r.laws.iter().zip(law_targets(1.0)) {
        assert!(
            (law.estimate.extrapolated - t / 2f64.sqrt()).abs() < 1e-4,
            "{}",
            law.name
        );
    }
}

#[test]
fn length_derivative_identity_across_the_sweep() {
    for curve in analytic_models() {
        for u in curve.default_point_params(5) {
            let g = canonical_graph(&curve, PointOnCurve::Param(u)).unwrap();
            let top = 0.9 * g.height_limit().min(50.0);
            for h in (0..12).map(|k| top * 4f64.powi(-k)) {
                let (_, m) = measure_at(&g, h, None).unwrap();
                let r = length_derivative_residual(&g, h).unwrap();
                assert!(r < 1e-6 * m.l, "{} u={u} h={h}: {r} vs L={}", curve.label(), m.l);
            }
        }
    }
}

#[test]
fn length_derivative_closed_forms() {
    let p = chordlab::CurveModel::parabola(0.0, 1.0).unwrap();
    assert!(length_derivative_identity(&p, PointOnCurve::Param(0.0), 0.3).unwrap() < 1e-10);
    // Unit circle at h = 0.5: L − h·dL/dh = √3 − 0.5/√0.75.
    let c = circle();
    let g = canonical_graph(&c, PointOnCurve::Param(0.0)).unwrap();
    let (_, m) = measure_at(&g, 0.5, None).unwrap();
    assert!((m.ell - (3f64.sqrt() - 0.5 / 0.75f64.sqrt())).abs() < 1e-12);
    assert!(length_derivative_identity(&c, PointOnCurve::Param(0.0), 0.5).unwrap() < 1e-8);
}

#[test]
fn sampled_identity_is_reported() {
    let curve = fit_local_model(&cloud("circle", chordlab::Isometry::IDENTITY, 0.0, 1), 10).unwrap();
    for at in curve.default_points(3) {
        let g = canonical_graph(&curve, at).unwrap();
        let h = 0.2 * g.height_limit();
        let r = length_derivative_residual(&g, h).unwrap();
        let (_, m) = measure_at(&g, h, None).unwrap();
        println!("sampled circle {at:?} h={h:.3e}: residual/L = {:.3e}", r / m.l);
        assert!(r.is_finite());
    }
}
