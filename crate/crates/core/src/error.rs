use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arity mismatch: expected {expected} arity, found {found}")]
    ArityMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("empty sequence window")]
    EmptyWindow,

    #[error("window larger than the generator windows ({window} > {generators})")]
    WindowTooLarge { window: String, generators: String },

    #[error("epsilon {0} outside (0, 1]")]
    EpsOutOfRange(f64),

    #[error("grid node {node} on axis {axis} lies outside the domain")]
    GridOutsideDomain { axis: usize, node: f64 },

    #[error("grid has {grid} axes but the net lives in {net} dimensions")]
    GridDimension { grid: usize, net: usize },

    #[error("derivative order {order} exceeds the configured cap {cap}")]
    OrderTooHigh { order: usize, cap: usize },

    #[error("derivative mode `{mode}` not admissible: {reason}")]
    ModeNotAdmissible { mode: &'static str, reason: String },

    #[error("spectral derivative needs negligible boundary values; relative boundary magnitude {0:e}")]
    BoundaryNotSmall(f64),

    #[error("tail criterion violated on axis {axis}: boundary/max ratio {ratio:e} above {tolerance:e}")]
    TailCriterion {
        axis: usize,
        ratio: f64,
        tolerance: f64,
    },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("insufficient data: {usable} usable points, {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("malformed tabulated data: {0}")]
    Tabulated(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
