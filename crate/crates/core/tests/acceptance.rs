//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use chordlab::asymptotics::{length_derivative_residual, small_h_laws};
use chordlab::characterize::{
    detect_parabola, euler_fit, graph_ode_residuals, power_law_fit, ratio_profile, reconstruct_parabola, HeightGrid,
    Tolerance,
};
use chordlab::construction::measure_at;
use chordlab::curve::{canonical_graph, CurveModel, LocalGraph, PointOnCurve};
use chordlab::ingest::fit_local_model;
use common::*;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_parabola_graphs(seed: u64, count: usize) -> Vec<(f64, f64, CurveModel)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let (a, b) = random_parabola_params(&mut r);
            (
                a,
                b,
                CurveModel::parabola(a, b).unwrap().transformed(random_motion(&mut r)),
            )
        })
        .collect()
}

fn parabola_heights(g: &LocalGraph, b: f64, levels: i32) -> Vec<f64> {
    let top = 0.5 * g.height_limit().min(10.0 * b);
    (0..levels).map(|k| top * 4f64.powi(-k)).collect()
}

fn c1_parabola_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (a, b, curve) in random_parabola_graphs(101, 20) {
        for at in curve.default_points(5) {
            let g = canonical_graph(&curve, at).map_err(|e| e.to_string())?;
            for h in parabola_heights(&g, b, 8) {
                let (_, m) = measure_at(&g, h, None).map_err(|e| e.to_string())?;
                for (v, t) in [
                    (m.ratio_st(), 4.0 / 3.0),
                    (m.ratio_sv(), 2.0 / 3.0),
                    (m.ratio_sw(), 8.0 / 9.0),
                    (m.ratio_ut(), 0.5),
                    (m.ratio_ell_l(), 0.5),
                ] {
                    let e = rel(v, t);
                    worst = worst.max(e);
                    check(e < 1e-8, || format!("a={a} b={b} {at:?} h={h}: {v} vs {t}"))?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("max rel. error {worst:.1e}, {elapsed:.2?}"))
}

fn c2_closed_form() -> Outcome {
    let curve = CurveModel::parabola(0.0, 1.0).unwrap();
    let g = canonical_graph(&curve, PointOnCurve::Param(0.0)).map_err(|e| e.to_string())?;
    let (_, m) = measure_at(&g, 0.5, None).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (name, v, t, tol) in [
        ("L", m.l, 2.0, 1e-9),
        ("ell", m.ell, 1.0, 1e-9),
        ("T", m.t, 0.5, 1e-9),
        ("U", m.u, 0.25, 1e-9),
        ("V", m.v, 1.0, 1e-9),
        ("W", m.w, 0.75, 1e-9),
        ("S", m.s, 2.0 / 3.0, 1e-7),
    ] {
        worst = worst.max((v - t).abs());
        check((v - t).abs() < tol, || format!("{name} = {v}, want {t}"))?;
    }
    Ok(format!("max abs. error {worst:.1e}"))
}

fn c3_asymptotic_laws() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut least_gain = f64::INFINITY;
    for curve in [circle(), ellipse(), cosh()] {
        for u in curve.default_point_params(5) {
            let g = canonical_graph(&curve, PointOnCurve::Param(u)).map_err(|e| e.to_string())?;
            let h0 = 0.1 * g.height_limit().min(10.0);
            let coarse = small_h_laws(&g, h0, 8).map_err(|e| e.to_string())?;
            let fine = small_h_laws(&g, h0, 10).map_err(|e| e.to_string())?;
            for (c, f) in coarse.laws.iter().zip(&fine.laws) {
                let (ec, ef) = (c.estimate.abs_error.unwrap(), f.estimate.abs_error.unwrap());
                worst = worst.max(ec);
                least_gain = least_gain.min(ec / ef);
                check(ec < 1e-3, || format!("{} u={u} {}: error {ec}", curve.label(), c.name))?;
                check(ef * 4.0 <= ec, || {
                    format!("{} u={u} {}: {ec} -> {ef}", curve.label(), c.name)
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max abs. error {worst:.1e}, smallest refinement gain {least_gain:.1}x, {elapsed:.2?}"
    ))
}

fn c4_length_identity() -> Outcome {
    let mut worst = 0.0f64;
    for curve in analytic_models() {
        for u in curve.default_point_params(5) {
            let g = canonical_graph(&curve, PointOnCurve::Param(u)).map_err(|e| e.to_string())?;
            let top = 0.9 * g.height_limit().min(50.0);
            for h in (0..12).map(|k| top * 4f64.powi(-k)) {
                let (_, m) = measure_at(&g, h, None).map_err(|e| e.to_string())?;
                let r = length_derivative_residual(&g, h).map_err(|e| e.to_string())? / m.l;
                worst = worst.max(r);
                check(r < 1e-6, || format!("{} u={u} h={h}: residual/L = {r}", curve.label()))?;
            }
        }
    }
    Ok(format!("max residual/L {worst:.1e}"))
}

fn c5_detection() -> Outcome {
    let mut r = rng(505);
    let run = |kind: &str, noise: f64, motion, seed| -> Result<(bool, f64), String> {
        let curve = fit_local_model(&cloud(kind, motion, noise, seed), 10).map_err(|e| e.to_string())?;
        let grid = HeightGrid::Relative {
            fraction: 0.5,
            levels: 5,
        };
        let table = ratio_profile(&curve, &curve.default_points(5), &grid).map_err(|e| e.to_string())?;
        let v = detect_parabola(&table, Tolerance::Auto).map_err(|e| e.to_string())?;
        let worst = v
            .families
            .iter()
            .filter(|f| f.decisive)
            .map(|f| f.max_deviation)
            .fold(0.0, f64::max);
        Ok((v.is_parabola, worst / v.tolerance))
    };
    let mut notes = Vec::new();
    for k in 0..3 {
        let (is, ratio) = run("parabola", 0.0, random_motion(&mut r), k)?;
        check(is, || {
            format!("exact parabola cloud {k} rejected (deviation/tol {ratio:.2})")
        })?;
        notes.push(format!("parabola {ratio:.2}"));
    }
    for kind in ["circle", "ellipse"] {
        let (is, ratio) = run(kind, 0.0, random_motion(&mut r), 7)?;
        check(!is, || format!("{kind} cloud accepted (deviation/tol {ratio:.2})"))?;
        notes.push(format!("{kind} {ratio:.1}"));
    }
    let (is, ratio) = run("parabola", 1e-6, random_motion(&mut r), 9)?;
    check(is, || {
        format!("noisy parabola cloud rejected (deviation/tol {ratio:.2})")
    })?;
    notes.push(format!("noisy parabola {ratio:.2}"));
    Ok(format!("deviation/tolerance: {}", notes.join(", ")))
}

fn c6_reconstruction() -> Outcome {
    let mut worst = 0.0f64;
    for (a, b, curve) in random_parabola_graphs(606, 20) {
        let g = canonical_graph(&curve, PointOnCurve::Param(0.0)).map_err(|e| e.to_string())?;
        let rec = reconstruct_parabola(&g).map_err(|e| e.to_string())?;
        let (ea, eb) = (rel(rec.coefficients.a, a), rel(rec.coefficients.b, b));
        worst = worst.max(ea).max(eb);
        check(ea < 1e-6 && eb < 1e-6, || {
            format!("a={a} b={b}: got {:?}", rec.coefficients)
        })?;
        check(rec.residual < rec.threshold, || {
            format!("a={a} b={b}: residual {}", rec.residual)
        })?;
    }
    Ok(format!("max rel. error {worst:.1e}"))
}

fn c7_ode_residuals() -> Outcome {
    let mut worst_ode = 0.0f64;
    let mut worst_c2 = 0.0f64;
    for (a, b, curve) in random_parabola_graphs(707, 10) {
        let g = canonical_graph(&curve, PointOnCurve::Param(0.0)).map_err(|e| e.to_string())?;
        let (lo, hi) = g.x_range();
        let reach = 0.9 * lo.abs().min(hi).min(b);
        let ts: Vec<f64> = (1..=10)
            .flat_map(|k| [0.1 * k as f64 * reach, -0.1 * k as f64 * reach])
            .collect();
        let rep = graph_ode_residuals(&g, &ts).map_err(|e| e.to_string())?;
        worst_ode = worst_ode.max(rep.tangent_ode);
        check(rep.tangent_ode < 1e-12, || {
            format!("a={a} b={b}: residual {}", rep.tangent_ode)
        })?;

        let samples: Vec<(f64, f64)> = parabola_heights(&g, b, 8)
            .into_iter()
            .map(|h| measure_at(&g, h, None).map(|(_, m)| (h, m.l)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let fit = euler_fit(&samples).map_err(|e| e.to_string())?;
        let c1 = 8f64.sqrt() / g.curvature().sqrt();
        worst_c2 = worst_c2.max(fit.c2.abs());
        check(fit.c2.abs() < 1e-8, || format!("a={a} b={b}: C2 = {}", fit.c2))?;
        check((fit.c1 - c1).abs() < 1e-6, || {
            format!("a={a} b={b}: C1 = {} vs {c1}", fit.c1)
        })?;
    }
    let g = canonical_graph(&circle(), PointOnCurve::Param(0.0)).map_err(|e| e.to_string())?;
    let circle_res = graph_ode_residuals(&g, &[0.5]).map_err(|e| e.to_string())?.tangent_ode;
    check(circle_res > 1e-3, || format!("circle residual {circle_res}"))?;
    Ok(format!(
        "parabola residual {worst_ode:.1e}, |C2| {worst_c2:.1e}, circle residual {circle_res:.3}"
    ))
}

fn c8_power_laws() -> Outcome {
    let mut worst = 0.0f64;
    for (a, b, curve) in random_parabola_graphs(808, 5) {
        for at in curve.default_points(3) {
            let g = canonical_graph(&curve, at).map_err(|e| e.to_string())?;
            let top = 0.5 * g.height_limit().min(10.0 * b);
            let ms: Vec<_> = (0..9)
                .map(|k| measure_at(&g, top * 10f64.powf(-0.5 * k as f64), None).map(|(_, m)| m))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for (name, pairs, lambda) in [
                ("S-V", ms.iter().map(|m| (m.v, m.s)).collect::<Vec<_>>(), 2.0 / 3.0),
                ("U-T", ms.iter().map(|m| (m.t, m.u)).collect(), 0.5),
                ("S-W", ms.iter().map(|m| (m.w, m.s)).collect(), 8.0 / 9.0),
            ] {
                let fit = power_law_fit(&pairs).map_err(|e| e.to_string())?;
                let e = (fit.lambda - lambda).abs().max((fit.mu - 1.0).abs());
                worst = worst.max(e);
                check(e < 1e-6, || format!("a={a} b={b} {name}: ({}, {})", fit.lambda, fit.mu))?;
            }
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

fn c9_rigid_motion() -> Outcome {
    let mut r = rng(909);
    let mut worst = 0.0f64;
    let grid = HeightGrid::Relative {
        fraction: 0.5,
        levels: 5,
    };
    for curve in analytic_models() {
        for _ in 0..3 {
            let moved = curve.transformed(random_motion(&mut r));
            let points = curve.default_points(5);
            let t0 = ratio_profile(&curve, &points, &grid).map_err(|e| e.to_string())?;
            let t1 = ratio_profile(&moved, &points, &grid).map_err(|e| e.to_string())?;
            for (x, y) in t0.rows.iter().zip(&t1.rows) {
                let (Some(rx), Some(ry)) = (x.ratios(), y.ratios()) else {
                    return Err(format!("{}: skipped cell at h={}", curve.label(), x.h));
                };
                for (p, q) in rx.iter().zip(ry) {
                    worst = worst.max((p - q).abs());
                    check((p - q).abs() < 1e-10, || {
                        format!("{} h={}: {p} vs {q}", curve.label(), x.h)
                    })?;
                }
            }
        }
    }
    // Point clouds sampled under two different motions are fitted
    // independently in world coordinates.
    let mut sampled = 0.0f64;
    for kind in ["parabola", "circle", "ellipse"] {
        let tables: Vec<_> = (0..2)
            .map(|_| {
                let curve =
                    fit_local_model(&cloud(kind, random_motion(&mut r), 0.0, 0), 10).map_err(|e| e.to_string())?;
                ratio_profile(&curve, &curve.default_points(5), &grid).map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        for (x, y) in tables[0].valid_rows().zip(tables[1].valid_rows()) {
            for (p, q) in x.ratios().unwrap().iter().zip(y.ratios().unwrap()) {
                sampled = sampled.max((p - q).abs());
                check((p - q).abs() < 1e-10, || format!("{kind} cloud h={}: {p} vs {q}", x.h))?;
            }
        }
    }
    Ok(format!(
        "max ratio change {worst:.1e} (analytic), {sampled:.1e} (sampled)"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("parabola exactness", c1_parabola_exactness),
        ("closed-form spot check", c2_closed_form),
        ("asymptotic laws", c3_asymptotic_laws),
        ("length identity", c4_length_identity),
        ("detection", c5_detection),
        ("reconstruction", c6_reconstruction),
        ("ODE residuals", c7_ode_residuals),
        ("power laws", c8_power_laws),
        ("rigid-motion invariance", c9_rigid_motion),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
