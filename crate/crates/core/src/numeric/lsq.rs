//! Small dense weighted least-squares fits.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Condition number above which a fit is refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Unweighted residuals `y_i - Σ c_k φ_k(x_i)`.
    pub residuals: Vec<f64>,
    /// Condition number of the column-equilibrated design matrix.
    pub condition: f64,
}

impl LeastSquares {
    /// Residual root-mean-square with the degrees-of-freedom correction
    /// (falls back to the plain mean when the fit interpolates).
    pub fn rms(&self) -> f64 {
        let n = self.residuals.len();
        let p = self.coefficients.len();
        let ss: f64 = self.residuals.iter().map(|r| r * r).sum();
        let dof = if n > p { n - p } else { n.max(1) };
        (ss / dof as f64).sqrt()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

/// Solves `min Σ w_i (y_i - Σ_k c_k A_ik)^2` for the design rows in `design`.
///
/// Columns are equilibrated before the SVD, so `condition` measures genuine
/// collinearity rather than differing units.
pub fn weighted_fit(design: &[Vec<f64>], y: &[f64], weights: Option<&[f64]>) -> Result<LeastSquares> {
    let n = design.len();
    if n == 0 || n != y.len() {
        return Err(Error::BadParameter("least-squares data is empty or ragged".into()));
    }
    let p = design[0].len();
    if n < p {
        return Err(Error::BadParameter(format!(
            "least squares needs at least {p} rows, got {n}"
        )));
    }
    let mut a = DMatrix::<f64>::zeros(n, p);
    let mut b = DVector::<f64>::zeros(n);
    for (i, row) in design.iter().enumerate() {
        let sw = weights.map_or(1.0, |w| w[i].sqrt());
        for (k, v) in row.iter().enumerate() {
            a[(i, k)] = sw * v;
        }
        b[i] = sw * y[i];
    }
    let mut scale = vec![1.0; p];
    for (k, s) in scale.iter_mut().enumerate() {
        let norm = a.column(k).norm();
        if norm > 0.0 {
            *s = norm;
            a.column_mut(k).scale_mut(1.0 / norm);
        }
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::BadParameter(format!("least-squares solve failed: {e}")))?;
    let coefficients: Vec<f64> = (0..p).map(|k| sol[k] / scale[k]).collect();
    let residuals = design
        .iter()
        .zip(y)
        .map(|(row, yi)| yi - row.iter().zip(&coefficients).map(|(v, c)| v * c).sum::<f64>())
        .collect();
    Ok(LeastSquares {
        coefficients,
        residuals,
        condition,
    })
}
