//! Numerical building blocks: root finding, quadrature, least squares.

pub mod lsq;
pub mod quad;
pub mod roots;

pub use lsq::{weighted_fit, LeastSquares};
pub use quad::{adaptive_simpson, Quadrature};
pub use roots::{bisect, grow_bracket, newton_bisect};

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
