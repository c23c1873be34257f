//! Command-line front end: `construct`, `limits`, `ratios`, `detect`,
//! `reconstruct`.
//!
//! [`run`] is a pure function of its arguments (plus any `--input` file):
//! it returns the exit status and the text to print, so identical argument
//! lists always give byte-identical output.

pub mod format;
pub mod svg;

use crate::asymptotics::{small_h_laws, DEFAULT_LEVELS};
use crate::characterize::{
    detect_parabola, ratio_profile, reconstruct_parabola, HeightGrid, RatioTable, Tolerance, Verdict,
};
use crate::construction::{measure_at, Figure, Measures};
use crate::curve::{canonical_graph, Catenary, CurveModel, PointOnCurve};
use crate::error::Error;
use crate::geom::{Isometry, Point2};
use crate::ingest::{fit_local_model, parse_points};
use clap::{Args, Parser, Subcommand, ValueEnum};
use format::{fmt_float, number, to_json};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::PathBuf;

/// Default half-width of sampled-curve fit windows.
pub const DEFAULT_WINDOW: usize = 10;
/// Half-width of the `cosh` graph's domain, in units of its scale `c`.
const COSH_REACH: f64 = 3.0;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "chordlab",
    version,
    about = "Chord and tangent-triangle measurements on convex curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Build the figure at one base point and height.
    Construct(ConstructArgs),
    /// Estimate the small-h limits at one base point.
    Limits(LimitsArgs),
    /// Sweep the area and length ratios over a grid.
    Ratios(SweepArgs),
    /// Decide whether the curve is a parabola.
    Detect(DetectArgs),
    /// Recover the parabola through a base point.
    Reconstruct(PointArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// (x − a·y)² = 2b·y
    Parabola,
    /// radius r, lowest point at the origin
    Circle,
    /// semi-axes semi-x, semi-y, lowest point at the origin
    Ellipse,
    /// y = c·(cosh(x/c) − 1)
    Cosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long, value_enum, required_unless_present = "input", conflicts_with = "input")]
    pub curve: Option<Family>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub semi_x: f64,
    #[arg(long, default_value_t = 1.0)]
    pub semi_y: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Rotation applied to the curve, radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rotate: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tx: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ty: f64,
    /// CSV file of `x,y` samples.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Half-width of the local fit window for sampled input.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PointArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Base point: curve parameter, or sample index for `--input`.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long)]
    pub h: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Largest height of the grid (default: a tenth of the working range).
    #[arg(long)]
    pub h0: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 5)]
    pub p_count: usize,
    /// Largest height, absolute. Without it heights are relative to each
    /// point's working range.
    #[arg(long)]
    pub h_max: Option<f64>,
    /// Largest height as a fraction of each point's working range.
    #[arg(long, default_value_t = 0.5, conflicts_with = "h_max")]
    pub h_frac: f64,
    #[arg(long, default_value_t = 5)]
    pub h_levels: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// `auto` or a number.
    #[arg(long, default_value = "auto")]
    pub tol: String,
}

/// Exit status plus the text destined for standard output and error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let out = match &cli.command {
        Command::Construct(a) => &a.point.out,
        Command::Limits(a) => &a.point.out,
        Command::Ratios(a) => &a.out,
        Command::Detect(a) => &a.sweep.out,
        Command::Reconstruct(a) => &a.out,
    };
    match execute(&cli) {
        Ok(artifact) => match &out.output {
            Some(path) => match std::fs::write(path, &artifact) {
                Ok(()) => Outcome {
                    code: 0,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: format!("error: Io: cannot write {}: {e}\n", path.display()),
                },
            },
            None => Outcome {
                code: 0,
                stdout: artifact,
                stderr: String::new(),
            },
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(Failure::Io(m)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: Io: {m}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Run<String> {
    let config = serde_json::to_value(&cli.command).expect("arguments serialize");
    match &cli.command {
        Command::Construct(a) => construct(a, config),
        Command::Limits(a) => limits(a, config),
        Command::Ratios(a) => ratios(a, config),
        Command::Detect(a) => detect(a, config),
        Command::Reconstruct(a) => reconstruct(a, config),
    }
}

fn build_curve(args: &CurveArgs) -> Run<CurveModel> {
    let curve = match (&args.input, args.curve) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            let cloud = parse_points(&text, &path.display().to_string())?;
            fit_local_model(&cloud, args.window)?
        }
        (None, Some(Family::Parabola)) => CurveModel::parabola(args.a, args.b)?,
        (None, Some(Family::Circle)) => CurveModel::circle(args.r)?,
        (None, Some(Family::Ellipse)) => CurveModel::ellipse(args.semi_y, args.semi_x)?,
        (None, Some(Family::Cosh)) => {
            if !(args.c > 0.0 && args.c.is_finite()) {
                return Err(Error::BadParameter(format!("cosh scale c = {} must be positive", args.c)).into());
            }
            CurveModel::graph(Catenary { c: args.c }, -COSH_REACH * args.c, COSH_REACH * args.c)?
        }
        (None, None) => return Err(Failure::Usage("one of --curve or --input is required".into())),
    };
    let motion = Isometry::new(args.rotate, Point2::new(args.tx, args.ty));
    Ok(if motion.is_identity() {
        curve
    } else {
        curve.transformed(motion)
    })
}

fn base_point(curve: &CurveModel, p: Option<f64>) -> Run<PointOnCurve> {
    if let Some(m) = curve.sampled_model() {
        let n = m.cloud().len();
        return match p {
            None => Ok(PointOnCurve::Sample(n / 2)),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v < n as f64 => Ok(PointOnCurve::Sample(v as usize)),
            Some(v) => Err(Failure::Usage(format!(
                "--p must be a sample index in 0..{n} for sampled input, got {v}"
            ))),
        };
    }
    Ok(PointOnCurve::Param(p.unwrap_or(0.0)))
}

fn report(config: Value, results: Value, errors: Vec<Value>) -> String {
    let mut m = Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("config".into(), config);
    m.insert("results".into(), results);
    m.insert("errors".into(), Value::Array(errors));
    to_json(&Value::Object(m))
}

fn point_json(p: Point2) -> Value {
    json!({"x": number(p.x), "y": number(p.y)})
}

fn measures_json(m: &Measures) -> Value {
    json!({
        "L": number(m.l), "ell": number(m.ell), "T": number(m.t), "U": number(m.u),
        "V": number(m.v), "W": number(m.w), "S": number(m.s), "alpha": number(m.alpha),
    })
}

fn ratios_json(m: &Measures) -> Value {
    json!({
        "r_ST": number(m.ratio_st()), "r_SV": number(m.ratio_sv()), "r_SW": number(m.ratio_sw()),
        "r_UT": number(m.ratio_ut()), "r_ellL": number(m.ratio_ell_l()),
    })
}

/// Header of sweep CSV files.
pub const SWEEP_HEADER: [&str; 15] = [
    "p_id",
    "h",
    "L",
    "ell",
    "T",
    "U",
    "V",
    "W",
    "S",
    "r_ST",
    "r_SV",
    "r_SW",
    "r_UT",
    "r_ellL",
    "skip_reason",
];

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn sweep_row(p_id: usize, h: f64, m: Option<&Measures>, skip: Option<&str>) -> Vec<String> {
    let mut r = vec![p_id.to_string(), fmt_float(h)];
    match m {
        Some(m) => r.extend(
            [
                m.l,
                m.ell,
                m.t,
                m.u,
                m.v,
                m.w,
                m.s,
                m.ratio_st(),
                m.ratio_sv(),
                m.ratio_sw(),
                m.ratio_ut(),
                m.ratio_ell_l(),
            ]
            .map(fmt_float),
        ),
        None => r.extend(std::iter::repeat_n(String::new(), 12)),
    }
    r.push(skip.unwrap_or("").to_string());
    r
}

fn no_svg(format: Format, what: &str) -> Run<()> {
    if format == Format::Svg {
        return Err(Failure::Usage(format!(
            "--format svg is only available for construct, not {what}"
        )));
    }
    Ok(())
}

fn construct(a: &ConstructArgs, config: Value) -> Run<String> {
    let curve = build_curve(&a.point.curve)?;
    let at = base_point(&curve, a.point.p)?;
    let g = canonical_graph(&curve, at)?;
    let (fig, m) = measure_at(&g, a.h, None)?;
    Ok(match a.point.out.format {
        Format::Svg => svg::figure_svg(&g, &fig),
        Format::Csv => csv_text(&SWEEP_HEADER, vec![sweep_row(0, a.h, Some(&m), None)]),
        Format::Json => report(config, construct_json(&curve, &g, &fig, &m), vec![]),
    })
}

fn figure_points_json(p: &crate::construction::FigurePoints) -> Value {
    json!({
        "A": point_json(p.a), "A1": point_json(p.a1), "A2": point_json(p.a2),
        "B": point_json(p.b), "B1": point_json(p.b1), "B2": point_json(p.b2),
    })
}

fn construct_json(curve: &CurveModel, g: &crate::curve::LocalGraph, fig: &Figure, m: &Measures) -> Value {
    json!({
        "curve": curve.label(),
        "P": point_json(fig.base_point()),
        "kappa": number(g.curvature()),
        "h": number(fig.h),
        "height_limit": number(g.height_limit()),
        "points": figure_points_json(&fig.world()),
        "local_points": figure_points_json(&fig.local),
        "measures": measures_json(m),
        "ratios": ratios_json(m),
        "U_direct": number(fig.tangent_triangle_area_direct()),
    })
}

fn limits(a: &LimitsArgs, config: Value) -> Run<String> {
    no_svg(a.point.out.format, "limits")?;
    let curve = build_curve(&a.point.curve)?;
    let at = base_point(&curve, a.point.p)?;
    let g = canonical_graph(&curve, at)?;
    let h0 = a.h0.unwrap_or(0.1 * g.height_limit());
    let r = small_h_laws(&g, h0, a.levels)?;
    let estimates: Vec<(&str, &crate::asymptotics::LimitEstimate)> = r
        .laws
        .iter()
        .map(|l| (l.name, &l.estimate))
        .chain(std::iter::once(("alpha", &r.alpha)))
        .collect();
    Ok(match a.point.out.format {
        Format::Csv => csv_text(
            &["quantity", "extrapolated", "theoretical", "abs_error", "error_estimate"],
            estimates
                .iter()
                .map(|(name, e)| {
                    vec![
                        name.to_string(),
                        fmt_float(e.extrapolated),
                        fmt_float(e.theoretical.unwrap_or(f64::NAN)),
                        fmt_float(e.abs_error.unwrap_or(f64::NAN)),
                        fmt_float(e.error_estimate),
                    ]
                })
                .collect(),
        ),
        _ => {
            let list: Vec<Value> = estimates
                .iter()
                .map(|(name, e)| {
                    json!({
                        "quantity": name,
                        "extrapolated": number(e.extrapolated),
                        "theoretical": e.theoretical.map_or(Value::Null, number),
                        "abs_error": e.abs_error.map_or(Value::Null, number),
                        "error_estimate": number(e.error_estimate),
                        "order": e.order,
                        "samples": e.samples.iter().map(|(h, q)| json!([number(*h), number(*q)])).collect::<Vec<_>>(),
                    })
                })
                .collect();
            report(
                config,
                json!({
                    "curve": curve.label(),
                    "P": point_json(g.base_point()),
                    "kappa": number(r.kappa),
                    "h0": number(r.h0),
                    "levels": r.levels,
                    "max_abs_error": number(r.max_abs_error()),
                    "limits": list,
                }),
                vec![],
            )
        }
    })
}

fn sweep_table(a: &SweepArgs) -> Run<(CurveModel, RatioTable)> {
    let curve = build_curve(&a.curve)?;
    let grid = match a.h_max {
        Some(h_max) => HeightGrid::Absolute {
            h_max,
            levels: a.h_levels,
        },
        None => HeightGrid::Relative {
            fraction: a.h_frac,
            levels: a.h_levels,
        },
    };
    let points = curve.default_points(a.p_count);
    let table = ratio_profile(&curve, &points, &grid)?;
    Ok((curve, table))
}

fn skip_errors(table: &RatioTable) -> Vec<Value> {
    table
        .rows
        .iter()
        .filter_map(|r| {
            r.skip_reason
                .as_ref()
                .map(|s| json!({"p_id": r.p_id, "h": number(r.h), "error": s}))
        })
        .collect()
}

fn ratios(a: &SweepArgs, config: Value) -> Run<String> {
    no_svg(a.out.format, "ratios")?;
    let (curve, table) = sweep_table(a)?;
    Ok(match a.out.format {
        Format::Csv => csv_text(
            &SWEEP_HEADER,
            table
                .rows
                .iter()
                .map(|r| sweep_row(r.p_id, r.h, r.measures.as_ref(), r.skip_reason.as_deref()))
                .collect(),
        ),
        _ => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "p_id": r.p_id,
                        "P": r.p.map_or(Value::Null, point_json),
                        "h": number(r.h),
                        "measures": r.measures.as_ref().map_or(Value::Null, measures_json),
                        "ratios": r.measures.as_ref().map_or(Value::Null, ratios_json),
                        "skip_reason": r.skip_reason.as_ref().map_or(Value::Null, |s| json!(s)),
                    })
                })
                .collect();
            report(
                config,
                json!({"curve": curve.label(), "rows": rows}),
                skip_errors(&table),
            )
        }
    })
}

fn parse_tol(s: &str) -> Run<Tolerance> {
    if s == "auto" {
        return Ok(Tolerance::Auto);
    }
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(Tolerance::Fixed(t)),
        _ => Err(Failure::Usage(format!(
            "--tol must be 'auto' or a positive number, got '{s}'"
        ))),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    let families: Vec<Value> = v
        .families
        .iter()
        .map(|f| {
            json!({
                "family": f.family,
                "target": number(f.target),
                "max_deviation": number(f.max_deviation),
                "witness": {"p_id": f.witness_p, "h": number(f.witness_h)},
                "decisive": f.decisive,
            })
        })
        .collect();
    json!({
        "is_parabola": v.is_parabola,
        "tolerance": number(v.tolerance),
        "worst_family": v.worst_family,
        "families": families,
        "lambda_spread": v.lambda_spread.map_or(Value::Null, number),
        "lambda_by_point": v.lambda_by_point.iter().map(|l| l.map_or(Value::Null, |l| json!({"lambda": number(l.lambda), "mu": number(l.mu)}))).collect::<Vec<_>>(),
        "grid": {"cells": v.cells, "skipped": v.skipped, "h_min": number(v.h_range.0), "h_max": number(v.h_range.1)},
    })
}

fn detect(a: &DetectArgs, config: Value) -> Run<String> {
    no_svg(a.sweep.out.format, "detect")?;
    let tol = parse_tol(&a.tol)?;
    let (curve, table) = sweep_table(&a.sweep)?;
    let v = detect_parabola(&table, tol)?;
    Ok(match a.sweep.out.format {
        Format::Csv => csv_text(
            &[
                "family",
                "target",
                "max_deviation",
                "witness_p",
                "witness_h",
                "decisive",
                "tolerance",
                "is_parabola",
            ],
            v.families
                .iter()
                .map(|f| {
                    vec![
                        f.family.to_string(),
                        fmt_float(f.target),
                        fmt_float(f.max_deviation),
                        f.witness_p.to_string(),
                        fmt_float(f.witness_h),
                        f.decisive.to_string(),
                        fmt_float(v.tolerance),
                        v.is_parabola.to_string(),
                    ]
                })
                .collect(),
        ),
        _ => {
            let mut results = verdict_json(&v);
            results["curve"] = json!(curve.label());
            if let Some(n) = table.noise {
                results["noise"] = number(n.noise);
                results["misfit"] = number(n.misfit);
            }
            report(config, results, skip_errors(&table))
        }
    })
}

fn reconstruct(a: &PointArgs, config: Value) -> Run<String> {
    no_svg(a.out.format, "reconstruct")?;
    let curve = build_curve(&a.curve)?;
    let at = base_point(&curve, a.p)?;
    let g = canonical_graph(&curve, at)?;
    let r = reconstruct_parabola(&g)?;
    Ok(match a.out.format {
        Format::Csv => csv_text(
            &["a", "b", "residual", "threshold", "status"],
            vec![vec![
                fmt_float(r.coefficients.a),
                fmt_float(r.coefficients.b),
                fmt_float(r.residual),
                fmt_float(r.threshold),
                r.status().to_string(),
            ]],
        ),
        _ => report(
            config,
            json!({
                "curve": curve.label(),
                "P": point_json(g.base_point()),
                "a": number(r.coefficients.a),
                "b": number(r.coefficients.b),
                "implicit_local": r.implicit.iter().map(|c| number(*c)).collect::<Vec<_>>(),
                "implicit_world": r.world_implicit.iter().map(|c| number(*c)).collect::<Vec<_>>(),
                "residual": number(r.residual),
                "threshold": number(r.threshold),
                "status": r.status(),
            }),
            vec![],
        ),
    })
}
