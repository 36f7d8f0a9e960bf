//! Empirical checks of the characterization theorems on individual nets.
//!
//! Each check measures exponent profiles in the relevant scales, classifies
//! them against a regular set (or its projections), and compares the
//! verdicts. Exponent-level cell checks localize disagreements.

mod fourier_check;
mod intersection;
mod null;
mod taylor;

use serde::Serialize;

use crate::asymptotics::{fit_profile, CellFit, ExponentProfile, FitConfig, MembershipVerdict, ScaleKind};
use crate::error::Result;
use crate::fourier::{fourier_sweep, FourierConfig};
use crate::nets::{seminorm_sweep, EpsilonGrid, GridPolicy, Net};
use crate::scalar::{to_f64, Scalar};

pub use fourier_check::check_fourier;
pub use intersection::check_intersection;
pub use null::{check_null, check_null_with, NullDirections};
pub use taylor::{taylor_derivative_bound, taylor_sweep, BoundReport, BoundStatus, DEFAULT_TAYLOR_TOL};

/// Settings shared by all checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckConfig<T> {
    pub eps_grid: EpsilonGrid<T>,
    pub max_q: usize,
    pub max_l: usize,
    pub grid: GridPolicy,
    pub fit: FitConfig,
    pub fourier: FourierConfig,
    /// Absolute slack on fitted exponents in cell comparisons.
    pub margin: f64,
    /// Also classify the halves `x_1 < 0`, `x_1 > 0` when the box straddles
    /// zero.
    pub half_boxes: bool,
    pub taylor_tol: f64,
}

impl<T: Scalar> Default for CheckConfig<T> {
    fn default() -> Self {
        Self {
            eps_grid: EpsilonGrid::default(),
            max_q: 4,
            max_l: 4,
            grid: GridPolicy::default(),
            fit: FitConfig::default(),
            fourier: FourierConfig::default(),
            margin: 0.15,
            half_boxes: true,
            taylor_tol: DEFAULT_TAYLOR_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Mixed scale = weight scale (vs `R_0`) intersected with derivative
    /// scale (vs `R^0`).
    IntersectionTh10,
    /// Mixed scale = weight scale (vs `R_0`) intersected with Fourier-weight
    /// scale (vs `R^0`).
    FourierProp2,
    /// Null test in the derivative scale.
    NullProp1,
    /// Null test in the weight scale.
    NullPropStar,
    /// Null test in the Fourier-weight scale.
    NullFourier,
    /// Null test in the mixed scale.
    SchwartzPropStar,
}

impl TheoremId {
    pub fn label(self) -> &'static str {
        match self {
            TheoremId::IntersectionTh10 => "intersection_th10",
            TheoremId::FourierProp2 => "fourier_prop2",
            TheoremId::NullProp1 => "null_prop1",
            TheoremId::NullPropStar => "null_prop_star",
            TheoremId::NullFourier => "null_fourier",
            TheoremId::SchwartzPropStar => "schwartz_prop_star",
        }
    }

    pub fn null_for(scale: ScaleKind) -> Self {
        match scale {
            ScaleKind::Mixed => TheoremId::SchwartzPropStar,
            ScaleKind::Derivative => TheoremId::NullProp1,
            ScaleKind::Weight => TheoremId::NullPropStar,
            ScaleKind::FourierWeight => TheoremId::NullFourier,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Pass,
    Fail,
    Indeterminate,
    NotApplicable,
    PreconditionFailed,
}

/// One exponent inequality tested on fitted values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellCheck {
    pub q: usize,
    pub l: usize,
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Verdicts on one half of a box split at `x_1 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfBoxReport<T> {
    pub side: &'static str,
    pub mixed: MembershipVerdict<T>,
    pub rhs: Vec<MembershipVerdict<T>>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport<T> {
    pub theorem: TheoremId,
    pub net: String,
    pub spec: String,
    pub status: ReportStatus,
    pub lhs: Option<MembershipVerdict<T>>,
    pub rhs: Vec<MembershipVerdict<T>>,
    pub agree: bool,
    pub cells: Vec<CellCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub half_boxes: Vec<HalfBoxReport<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<NullDirections>,
    pub notes: Vec<String>,
    pub config: ConfigSnapshot,
}

impl<T> TheoremReport<T> {
    pub fn pass(&self) -> bool {
        self.status == ReportStatus::Pass
    }

    pub fn failing_cells(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.ok)
    }
}

/// Configuration values recorded with every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSnapshot {
    pub eps0: f64,
    pub ratio: f64,
    pub count: usize,
    pub max_q: usize,
    pub max_l: usize,
    pub nodes_per_dim: usize,
    pub tail_tol: f64,
    pub m_max: f64,
    pub margin: f64,
}

impl ConfigSnapshot {
    pub fn of<T: Scalar>(config: &CheckConfig<T>, dims: usize) -> Self {
        Self {
            eps0: to_f64(config.eps_grid.eps0()),
            ratio: to_f64(config.eps_grid.ratio()),
            count: config.eps_grid.count(),
            max_q: config.max_q,
            max_l: config.max_l,
            nodes_per_dim: config.grid.intervals_for(dims),
            tail_tol: config.grid.tail_tol,
            m_max: config.fit.m_max,
            margin: config.margin,
        }
    }
}

/// Fitted profiles of one net in the spatial scales.
#[derive(Clone, Debug)]
pub struct SpatialFits {
    pub mixed: ExponentProfile,
    pub derivative: ExponentProfile,
    pub weight: ExponentProfile,
}

pub fn measure_spatial<T: Scalar>(net: &Net<T>, config: &CheckConfig<T>) -> Result<SpatialFits> {
    let profile = seminorm_sweep(net, &config.eps_grid, config.max_q, config.max_l, &config.grid)?;
    Ok(SpatialFits {
        mixed: fit_profile(&profile, &config.fit)?,
        derivative: fit_profile(&profile.restrict(ScaleKind::Derivative)?, &config.fit)?,
        weight: fit_profile(&profile.restrict(ScaleKind::Weight)?, &config.fit)?,
    })
}

pub fn measure_fourier<T: Scalar>(net: &Net<T>, config: &CheckConfig<T>) -> Result<ExponentProfile> {
    let profile = fourier_sweep(net, &config.eps_grid, config.max_l, &config.grid, &config.fourier)?;
    fit_profile(&profile, &config.fit)
}

/// Exponent used in cell inequalities: negligible cells count as 0, growth
/// exponents are clipped at 0. `None` for cells without data.
pub fn clipped_exponent(cell: Option<&CellFit>) -> Option<f64> {
    let fit = cell?.fit()?;
    Some(if fit.decay_class.is_negligible() {
        0.0
    } else {
        fit.exponent.max(0.0)
    })
}

fn verdicts_agree<T>(lhs: &MembershipVerdict<T>, rhs: &[&MembershipVerdict<T>]) -> Option<bool> {
    let l = lhs.key()?;
    let mut moderate = true;
    let mut negligible = true;
    for r in rhs {
        let (m, n) = r.key()?;
        moderate &= m;
        negligible &= n;
    }
    Some(l == (moderate, negligible))
}
