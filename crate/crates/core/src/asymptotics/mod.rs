//! Exponent estimation from seminorm sweeps and membership classification.

mod classify;
mod fit;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nets::{EpsilonGrid, SampleGrid};
use crate::regular_sets::Arity;
use crate::scalar::{to_f64, Scalar};

pub use classify::{classify, lattice_ceil, MembershipVerdict, VerdictWindow};
pub use fit::{fit_exponent, fit_profile, CellFit, DecayClass, ExponentFit, ExponentProfile, FitConfig, FitWindow};

/// Which seminorm family a profile measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleKind {
    /// `sup |x^beta d^alpha u|`, the full `(q, l)` rectangle.
    Mixed,
    /// `sup |d^alpha u|`, cells `(q, 0)`.
    Derivative,
    /// `sup |x^beta u|`, cells `(0, l)`.
    Weight,
    /// `sup |xi^beta u_hat|`, cells `(0, l)`.
    FourierWeight,
}

impl ScaleKind {
    pub const ALL: [ScaleKind; 4] = [
        ScaleKind::Mixed,
        ScaleKind::Derivative,
        ScaleKind::Weight,
        ScaleKind::FourierWeight,
    ];

    pub fn populates(self, q: usize, l: usize) -> bool {
        match self {
            ScaleKind::Mixed => true,
            ScaleKind::Derivative => l == 0,
            ScaleKind::Weight | ScaleKind::FourierWeight => q == 0,
        }
    }

    /// Arity of the regular set the scale is measured against.
    pub fn arity(self) -> Arity {
        match self {
            ScaleKind::Mixed => Arity::Double,
            _ => Arity::Single,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScaleKind::Mixed => "mixed",
            ScaleKind::Derivative => "derivative",
            ScaleKind::Weight => "weight",
            ScaleKind::FourierWeight => "fourier_weight",
        }
    }
}

/// Grid facts recorded per `eps`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridMeta {
    pub eps: f64,
    pub nodes: Vec<usize>,
    pub spacing: Vec<f64>,
    pub truncation: Vec<(Option<f64>, Option<f64>)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl GridMeta {
    pub fn of<T: Scalar>(eps: T, grid: &SampleGrid<T>) -> Self {
        Self {
            eps: to_f64(eps),
            nodes: grid.axes.iter().map(|a| a.len()).collect(),
            spacing: grid.axes.iter().map(|a| to_f64(a.spacing)).collect(),
            truncation: grid.truncation(),
            warnings: Vec::new(),
        }
    }
}

/// Dense table `s_{q,l}(eps_k)`; cells outside the scale are absent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormProfile<T> {
    pub eps_grid: EpsilonGrid<T>,
    pub scale: ScaleKind,
    pub max_q: usize,
    pub max_l: usize,
    cells: Vec<Option<Vec<T>>>,
    pub grid: Vec<GridMeta>,
}

impl<T: Scalar> SeminormProfile<T> {
    /// `rows[k]` holds the `(max_q + 1) x (max_l + 1)` table at `eps_k`,
    /// q-major; entries outside `scale` are dropped.
    pub fn from_rows(
        eps_grid: EpsilonGrid<T>,
        scale: ScaleKind,
        max_q: usize,
        max_l: usize,
        rows: &[Vec<T>],
        grid: Vec<GridMeta>,
    ) -> Result<Self> {
        let width = (max_q + 1) * (max_l + 1);
        if rows.len() != eps_grid.count() || rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("profile rows do not match the grid".into()));
        }
        if let Some(bad) = rows.iter().flatten().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("seminorm value {bad} is not finite and >= 0")));
        }
        let cells = (0..width)
            .map(|c| {
                let (q, l) = (c / (max_l + 1), c % (max_l + 1));
                scale
                    .populates(q, l)
                    .then(|| rows.iter().map(|r| r[c]).collect())
            })
            .collect();
        Ok(Self {
            eps_grid,
            scale,
            max_q,
            max_l,
            cells,
            grid,
        })
    }

    pub fn series(&self, q: usize, l: usize) -> Option<&[T]> {
        if q > self.max_q || l > self.max_l {
            return None;
        }
        self.cells[q * (self.max_l + 1) + l].as_deref()
    }

    /// Populated `(q, l)` cells in q-major order.
    pub fn populated(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cells.len())
            .filter(|&c| self.cells[c].is_some())
            .map(|c| (c / (self.max_l + 1), c % (self.max_l + 1)))
    }

    /// The derivative (`l = 0`) or weight (`q = 0`) part of a mixed profile.
    pub fn restrict(&self, scale: ScaleKind) -> Result<Self> {
        if self.scale != ScaleKind::Mixed || !matches!(scale, ScaleKind::Derivative | ScaleKind::Weight) {
            return Err(Error::InvalidParameter(format!(
                "cannot restrict a {} profile to {}",
                self.scale.label(),
                scale.label()
            )));
        }
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(c, v)| {
                let (q, l) = (c / (self.max_l + 1), c % (self.max_l + 1));
                if scale.populates(q, l) {
                    v.clone()
                } else {
                    None
                }
            })
            .collect();
        Ok(Self {
            cells,
            scale,
            ..self.clone()
        })
    }
}
