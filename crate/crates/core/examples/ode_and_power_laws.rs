//! Differential characterizations of the parabola and the S ~ lambda V^mu fit.

use chordlab::characterize::{euler_fit, graph_ode_residuals, power_law_fit};
use chordlab::{canonical_graph, measure_at, CurveModel, PointOnCurve};

fn main() -> chordlab::Result<()> {
    let ts: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    for curve in [CurveModel::parabola(0.0, 1.0)?, CurveModel::circle(1.0)?] {
        let g = canonical_graph(&curve, PointOnCurve::Param(0.0))?;
        let ode = graph_ode_residuals(&g, &ts[..9])?;
        let heights: Vec<f64> = (0..8).map(|k| 0.5 * 4f64.powi(-k)).collect();
        let ms = heights
            .iter()
            .map(|&h| measure_at(&g, h, None).map(|(_, m)| (h, m)))
            .collect::<chordlab::Result<Vec<_>>>()?;
        let euler = euler_fit(&ms.iter().map(|(h, m)| (*h, m.l)).collect::<Vec<_>>())?;
        let sv = power_law_fit(&ms.iter().map(|(_, m)| (m.v, m.s)).collect::<Vec<_>>())?;
        println!("{}", curve.label());
        println!("  max |2f^2f'' - f'^2(tf' - f)| = {:.2e}", ode.tangent_ode);
        println!(
            "  L ~ C1 sqrt(h) + C2 sqrt(h) ln h: C1 = {:.9}, C2 = {:.2e}, residual {:.2e}",
            euler.c1, euler.c2, euler.residual
        );
        println!("  S ~ lambda V^mu: lambda = {:.9}, mu = {:.9}", sv.lambda, sv.mu);
    }
    Ok(())
}
