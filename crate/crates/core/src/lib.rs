//! Chord and tangent-triangle measurements on strictly convex plane curves.
//!
//! A base point `P` on a curve and a height `h` determine a chord parallel to
//! the tangent at `P`, the tangents at the chord's endpoints, and a family of
//! lengths and areas (`L`, `ell`, `T`, `U`, `V`, `W`, `S`). This crate
//! builds that figure for analytic curves and for sampled point clouds,
//! estimates the small-`h` limits of the measures, and uses the ratios
//! between them to recognise parabolas and recover their equations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod characterize;
pub mod cli;
pub mod construction;
pub mod curve;
pub mod error;
pub mod geom;
pub mod ingest;
pub mod numeric;

pub use construction::{
    build_figure, build_figure_in, chord_endpoints, measure, measure_at, sector_area, Figure, Measures,
};
pub use curve::{canonical_graph, curvature_at, make_curve, CurveModel, CurveSpec, LocalGraph, PointOnCurve};
pub use error::{Error, Result};
pub use geom::{Isometry, Point2};
pub use ingest::{fit_local_model, load_points, parse_points, PointCloud};
