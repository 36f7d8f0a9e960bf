use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ScaleKind, SeminormProfile};
use crate::error::{Error, Result};
use crate::nets::EpsilonGrid;
use crate::scalar::{to_f64, Scalar};

/// Which points enter the least-squares exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FitWindow {
    /// The smaller-eps half of the usable points (at least four), where
    /// the leading power dominates.
    #[default]
    TrailingHalf,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    pub window: FitWindow,
    /// Decay order standing in for "every m" in the superpolynomial test.
    pub m_max: f64,
    /// Points per sliding-window slope.
    pub slope_window: usize,
    /// Values at or below this are exact zeros.
    pub floor: f64,
    /// Exponents are rounded up to this lattice before domination.
    pub lattice: f64,
    /// Allowed decrease between consecutive sliding slopes.
    pub slope_jitter: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            window: FitWindow::TrailingHalf,
            m_max: 8.0,
            slope_window: 4,
            floor: 1e-300,
            lattice: 0.1,
            slope_jitter: 1e-6,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slope_window < 2 {
            return Err(Error::InvalidParameter("slope_window must be at least 2".into()));
        }
        if !(self.lattice > 0.0) || !(self.floor >= 0.0) || !(self.m_max > 0.0) || !(self.slope_jitter >= 0.0) {
            return Err(Error::InvalidParameter("fit lattice, floor, m_max and slope_jitter must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    Polynomial,
    Superpolynomial,
    FlatZero,
}

impl DecayClass {
    pub fn label(self) -> &'static str {
        match self {
            DecayClass::Polynomial => "polynomial",
            DecayClass::Superpolynomial => "superpolynomial",
            DecayClass::FlatZero => "flat_zero",
        }
    }

    /// Faster than every tested power.
    pub fn is_negligible(self) -> bool {
        !matches!(self, DecayClass::Polynomial)
    }
}

/// `s(eps) ~ c eps^{-exponent}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub exponent: f64,
    /// RMS of the log residuals of the fit.
    pub residual: f64,
    pub decay_class: DecayClass,
    pub points_used: usize,
    pub zeros: usize,
    /// Slope of `log s` against `log eps` over the smallest-eps window.
    pub final_slope: Option<f64>,
}

/// A fitted cell, or the reason it has no exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellFit {
    Fit(ExponentFit),
    InsufficientData { usable: usize },
}

impl CellFit {
    pub fn fit(&self) -> Option<&ExponentFit> {
        match self {
            CellFit::Fit(f) => Some(f),
            CellFit::InsufficientData { .. } => None,
        }
    }
}

/// Least-squares slope and RMS residual of `y` against `x`.
fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - my - slope * (a - mx);
            r * r
        })
        .sum();
    (slope, (ss / n).sqrt())
}

/// Fits the exponent of one series measured on `eps_grid`.
pub fn fit_exponent<T: Scalar>(series: &[T], eps_grid: &EpsilonGrid<T>, config: &FitConfig) -> Result<ExponentFit> {
    config.validate()?;
    if series.len() != eps_grid.count() {
        return Err(Error::InvalidParameter(format!(
            "series has {} values for {} eps points",
            series.len(),
            eps_grid.count()
        )));
    }
    if let Some(bad) = series.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("series value {bad} is not finite and >= 0")));
    }
    let eps: Vec<f64> = eps_grid.values().into_iter().map(to_f64).collect();
    let values: Vec<f64> = series.iter().map(|&v| to_f64(v)).collect();
    let nonzero: Vec<usize> = (0..values.len()).filter(|&k| values[k] > config.floor).collect();
    let zeros = values.len() - nonzero.len();
    if nonzero.is_empty() {
        return Ok(ExponentFit {
            exponent: 0.0,
            residual: 0.0,
            decay_class: DecayClass::FlatZero,
            points_used: 0,
            zeros,
            final_slope: None,
        });
    }
    // eps decreases with k, so zeros after the last nonzero value vanish
    // toward eps -> 0.
    let trailing_zeros = zeros > 0 && nonzero.iter().enumerate().all(|(i, &k)| i == k);
    let min_points = config.slope_window.max(4);
    if nonzero.len() < min_points && !trailing_zeros {
        return Err(Error::InsufficientData {
            usable: nonzero.len(),
            required: min_points,
        });
    }
    let lx: Vec<f64> = nonzero.iter().map(|&k| eps[k].ln()).collect();
    let ly: Vec<f64> = nonzero.iter().map(|&k| values[k].ln()).collect();
    let take = match config.window {
        FitWindow::Full => lx.len(),
        FitWindow::TrailingHalf => lx.len().div_ceil(2).max(min_points).min(lx.len()),
    };
    let start = lx.len() - take;
    let (exponent, residual) = if take >= 2 {
        let (slope, res) = least_squares(&lx[start..], &ly[start..]);
        (-slope, res)
    } else {
        (0.0, 0.0)
    };
    let w = config.slope_window;
    let slopes: Vec<f64> = if lx.len() >= w {
        (0..=lx.len() - w)
            .map(|i| least_squares(&lx[i..i + w], &ly[i..i + w]).0)
            .collect()
    } else {
        Vec::new()
    };
    let final_slope = slopes.last().copied();
    let convex = slopes.windows(2).all(|p| p[1] >= p[0] - config.slope_jitter);
    let fast = final_slope.is_some_and(|s| s >= config.m_max) && convex;
    let decay_class = if trailing_zeros || fast {
        DecayClass::Superpolynomial
    } else {
        DecayClass::Polynomial
    };
    Ok(ExponentFit {
        exponent,
        residual,
        decay_class,
        points_used: take,
        zeros,
        final_slope,
    })
}

/// Fitted exponents `N_{q,l}` for every populated cell of a profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentProfile {
    pub scale: ScaleKind,
    pub max_q: usize,
    pub max_l: usize,
    pub eps_max: f64,
    pub eps_min: f64,
    cells: Vec<Option<CellFit>>,
}

impl ExponentProfile {
    pub fn cell(&self, q: usize, l: usize) -> Option<&CellFit> {
        if q > self.max_q || l > self.max_l {
            return None;
        }
        self.cells[q * (self.max_l + 1) + l].as_ref()
    }

    pub fn fit(&self, q: usize, l: usize) -> Option<&ExponentFit> {
        self.cell(q, l).and_then(CellFit::fit)
    }

    /// Populated cells in q-major order.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), &CellFit)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(c, f)| f.as_ref().map(|f| ((c / (self.max_l + 1), c % (self.max_l + 1)), f)))
    }

    pub fn is_complete(&self) -> bool {
        self.cells().all(|(_, c)| c.fit().is_some())
    }
}

pub fn fit_profile<T: Scalar>(profile: &SeminormProfile<T>, config: &FitConfig) -> Result<ExponentProfile> {
    config.validate()?;
    let width = (profile.max_q + 1) * (profile.max_l + 1);
    let cells = (0..width)
        .into_par_iter()
        .map(|c| {
            let (q, l) = (c / (profile.max_l + 1), c % (profile.max_l + 1));
            match profile.series(q, l) {
                None => Ok(None),
                Some(s) => match fit_exponent(s, &profile.eps_grid, config) {
                    Ok(f) => Ok(Some(CellFit::Fit(f))),
                    Err(Error::InsufficientData { usable, .. }) => Ok(Some(CellFit::InsufficientData { usable })),
                    Err(e) => Err(e),
                },
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentProfile {
        scale: profile.scale,
        max_q: profile.max_q,
        max_l: profile.max_l,
        eps_max: to_f64(profile.eps_grid.eps0()),
        eps_min: to_f64(profile.eps_grid.smallest()),
        cells,
    })
}

impl ExponentProfile {
    /// Builds a profile from explicit cells, q-major over the full
    /// rectangle.
    pub fn from_cells(
        scale: ScaleKind,
        max_q: usize,
        max_l: usize,
        eps_range: (f64, f64),
        cells: Vec<Option<CellFit>>,
    ) -> Result<Self> {
        if cells.len() != (max_q + 1) * (max_l + 1) {
            return Err(Error::InvalidParameter("cell count does not match the rectangle".into()));
        }
        Ok(Self {
            scale,
            max_q,
            max_l,
            eps_max: eps_range.0,
            eps_min: eps_range.1,
            cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(eps0: f64, ratio: f64, count: usize) -> EpsilonGrid<f64> {
        EpsilonGrid::new(eps0, ratio, count).unwrap()
    }

    #[test]
    fn exact_powers() {
        let g = grid(0.5, 0.75, 16);
        let s: Vec<f64> = g.values().iter().map(|e| e.powf(-2.0)).collect();
        let f = fit_exponent(&s, &g, &FitConfig::default()).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-9 && f.residual < 1e-9);
        assert_eq!(f.decay_class, DecayClass::Polynomial);
        let c = vec![5.0; 16];
        let f = fit_exponent(&c, &g, &FitConfig::default()).unwrap();
        assert!(f.exponent.abs() < 1e-12 && f.residual < 1e-12);
    }

    #[test]
    fn exp_small_is_superpolynomial() {
        let g = grid(0.5, 0.7, 12);
        let s: Vec<f64> = g.values().iter().map(|e| (-1.0 / e).exp()).collect();
        let f = fit_exponent(&s, &g, &FitConfig::default()).unwrap();
        assert_eq!(f.decay_class, DecayClass::Superpolynomial);
        assert!(f.final_slope.unwrap() > 8.0);
    }

    #[test]
    fn zeros_and_insufficient_data() {
        let g = grid(0.5, 0.75, 8);
        let f = fit_exponent(&[0.0; 8], &g, &FitConfig::default()).unwrap();
        assert_eq!(f.decay_class, DecayClass::FlatZero);
        let mut s = vec![0.0; 8];
        s[3] = 1.0;
        s[5] = 2.0;
        assert!(matches!(
            fit_exponent(&s, &g, &FitConfig::default()),
            Err(Error::InsufficientData { usable: 2, .. })
        ));
        let s = [1.0, 0.5, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0];
        let f = fit_exponent(&s, &g, &FitConfig::default()).unwrap();
        assert_eq!(f.decay_class, DecayClass::Superpolynomial);
    }

    #[test]
    fn cubic_growth_is_not_negligible() {
        let g = grid(0.5, 0.75, 16);
        let s: Vec<f64> = g.values().iter().map(|e| e.powi(-3)).collect();
        let f = fit_exponent(&s, &g, &FitConfig::default()).unwrap();
        assert!(!f.decay_class.is_negligible());
    }
}
