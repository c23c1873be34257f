use thiserror::Error;

/// Every failure the library can report.
///
/// Display strings start with the variant name so that command-line users
/// can grep for the failing condition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonConvex: curvature {kappa:e} <= 0 at parameter {at}")]
    NonConvex { at: f64, kappa: f64 },
    #[error("BadParameter: {0}")]
    BadParameter(String),
    #[error("OffCurve: point ({x}, {y}) is {distance:e} away from the curve")]
    OffCurve { x: f64, y: f64, distance: f64 },
    #[error("WindowTooSmall: {0}")]
    WindowTooSmall(String),
    #[error("HeightOutOfRange: h = {h} exceeds the usable height {limit} (or is below the resolvable floor)")]
    HeightOutOfRange { h: f64, limit: f64 },
    #[error("DegenerateFigure: {0}")]
    DegenerateFigure(String),
    #[error("ToleranceNotMet: quadrature stopped after {evaluations} evaluations with error estimate {estimate:e}")]
    ToleranceNotMet { evaluations: usize, estimate: f64 },
    #[error("NoApexInWindow: {0}")]
    NoApexInWindow(String),
    #[error("BadGrid: {0}")]
    BadGrid(String),
    #[error("IllConditioned: condition number {0:e} exceeds limit")]
    IllConditioned(f64),
    #[error("EmptyGrid: {0}")]
    EmptyGrid(String),
    #[error("InsufficientSpread: {0}")]
    InsufficientSpread(String),
    #[error("MissingThirdDerivative: local graph carries no third derivative at its origin")]
    MissingThirdDerivative,
    #[error("SingularAtOrigin: evaluation grid touches t = 0")]
    SingularAtOrigin,
    #[error("NonPositiveSample: sample {index} has non-positive base or value")]
    NonPositiveSample { index: usize },
    #[error("ParseError: line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("TooFewPoints: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("NotConvex: turning direction flips at sample {index}")]
    NotConvex { index: usize },
    #[error("DuplicatePoint: sample {index} coincides with its successor")]
    DuplicatePoint { index: usize },
    #[error("WindowTooLarge: window {window} needs {needed} samples, cloud has {available}")]
    WindowTooLarge {
        window: usize,
        needed: usize,
        available: usize,
    },
    #[error("RootNotBracketed: {0}")]
    RootNotBracketed(String),
}

impl Error {
    /// Variant name, as it appears at the start of the display string.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonConvex { .. } => "NonConvex",
            Error::BadParameter(_) => "BadParameter",
            Error::OffCurve { .. } => "OffCurve",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::HeightOutOfRange { .. } => "HeightOutOfRange",
            Error::DegenerateFigure(_) => "DegenerateFigure",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::NoApexInWindow(_) => "NoApexInWindow",
            Error::BadGrid(_) => "BadGrid",
            Error::IllConditioned(_) => "IllConditioned",
            Error::EmptyGrid(_) => "EmptyGrid",
            Error::InsufficientSpread(_) => "InsufficientSpread",
            Error::MissingThirdDerivative => "MissingThirdDerivative",
            Error::SingularAtOrigin => "SingularAtOrigin",
            Error::NonPositiveSample { .. } => "NonPositiveSample",
            Error::ParseError { .. } => "ParseError",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::NotConvex { .. } => "NotConvex",
            Error::DuplicatePoint { .. } => "DuplicatePoint",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::RootNotBracketed(_) => "RootNotBracketed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
