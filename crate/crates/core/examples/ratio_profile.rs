//! Sweeps the five ratios over base points and heights on a catenary.

use chordlab::characterize::{ratio_profile, HeightGrid};
use chordlab::curve::Catenary;
use chordlab::CurveModel;

fn main() -> chordlab::Result<()> {
    let curve = CurveModel::graph(Catenary { c: 1.0 }, -3.0, 3.0)?;
    let grid = HeightGrid::Absolute { h_max: 0.4, levels: 4 };
    let table = ratio_profile(&curve, &curve.default_points(3), &grid)?;
    println!("p_id  h          S/T       S/V       S/W       U/T       ell/L");
    for row in &table.rows {
        match row.ratios() {
            Some(r) => println!(
                "{:<5} {:<10.3e} {:.6}  {:.6}  {:.6}  {:.6}  {:.6}",
                row.p_id, row.h, r[0], r[1], r[2], r[3], r[4]
            ),
            None => println!(
                "{:<5} {:<10.3e} skipped: {}",
                row.p_id,
                row.h,
                row.skip_reason.as_deref().unwrap_or("")
            ),
        }
    }
    println!("parabola:        1.333333  0.666667  0.888889  0.500000  0.500000");
    Ok(())
}
