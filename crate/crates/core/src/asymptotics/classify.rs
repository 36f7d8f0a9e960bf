use serde::Serialize;

use super::{DecayClass, ExponentProfile, FitConfig, ScaleKind};
use crate::error::{Error, Result};
use crate::regular_sets::{dominates, DominationResult, DoubleSeqWindow, RegularSetSpec, SeqWindow, Window};
use crate::scalar::{lit, Scalar};

/// Smallest multiple of `lattice` not below `value`, tolerant to rounding
/// just above a lattice point.
pub fn lattice_ceil(value: f64, lattice: f64) -> f64 {
    let steps = (value / lattice - 1e-9).ceil();
    steps * lattice
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictWindow {
    pub max_q: usize,
    pub max_l: usize,
    pub eps_max: f64,
    pub eps_min: f64,
}

/// Moderate / negligible verdict of one profile against one regular set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict<T> {
    pub scale: ScaleKind,
    pub spec: String,
    pub moderate: bool,
    pub negligible: bool,
    /// Some cell had too few usable points; neither property is claimed.
    pub indeterminate: bool,
    pub domination: Option<DominationResult<T>>,
    /// Rounded exponents that were tested for domination, q-major.
    pub exponent_window: Vec<f64>,
    pub window: VerdictWindow,
    pub notes: Vec<String>,
}

impl<T> MembershipVerdict<T> {
    /// `(moderate, negligible)` when determinate.
    pub fn key(&self) -> Option<(bool, bool)> {
        (!self.indeterminate).then_some((self.moderate, self.negligible))
    }
}

/// Feeds rounded exponents to [`dominates`] and applies the negligibility
/// test cell by cell.
pub fn classify<T: Scalar>(
    profile: &ExponentProfile,
    spec: &RegularSetSpec<T>,
    config: &FitConfig,
) -> Result<MembershipVerdict<T>> {
    if spec.arity() != profile.scale.arity() {
        return Err(Error::ArityMismatch {
            expected: profile.scale.arity().name(),
            found: spec.arity().name(),
        });
    }
    let window = VerdictWindow {
        max_q: profile.max_q,
        max_l: profile.max_l,
        eps_max: profile.eps_max,
        eps_min: profile.eps_min,
    };
    let mut notes = Vec::new();
    let mut rounded = Vec::new();
    let mut negligible = true;
    let mut indeterminate = false;
    for ((q, l), cell) in profile.cells() {
        match cell.fit() {
            None => {
                indeterminate = true;
                notes.push(format!("cell ({q},{l}): insufficient data"));
                rounded.push(0.0);
            }
            Some(fit) => {
                if fit.decay_class == DecayClass::Polynomial {
                    negligible = false;
                    rounded.push(lattice_ceil((fit.exponent + fit.residual).max(0.0), config.lattice));
                } else {
                    rounded.push(0.0);
                }
            }
        }
    }
    if indeterminate {
        return Ok(MembershipVerdict {
            scale: profile.scale,
            spec: spec.label(),
            moderate: false,
            negligible: false,
            indeterminate: true,
            domination: None,
            exponent_window: rounded,
            window,
            notes,
        });
    }
    let values: Vec<T> = rounded.iter().map(|&v| lit(v)).collect();
    let w: Window<T> = match profile.scale {
        ScaleKind::Mixed => DoubleSeqWindow::new(profile.max_q, profile.max_l, values)?.into(),
        _ => SeqWindow::new(values)?.into(),
    };
    let domination = dominates(spec, &w)?;
    let mut moderate = domination.feasible;
    if negligible && !moderate {
        notes.push("negligible cells force the moderate verdict".into());
        moderate = true;
    }
    Ok(MembershipVerdict {
        scale: profile.scale,
        spec: spec.label(),
        moderate,
        negligible,
        indeterminate: false,
        domination: Some(domination),
        exponent_window: rounded,
        window,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{CellFit, ExponentFit};
    use crate::regular_sets::{Arity, Witness};

    fn poly(exponent: f64) -> Option<CellFit> {
        Some(CellFit::Fit(ExponentFit {
            exponent,
            residual: 0.0,
            decay_class: DecayClass::Polynomial,
            points_used: 8,
            zeros: 0,
            final_slope: Some(-exponent),
        }))
    }

    #[test]
    fn lattice_rounding() {
        assert_eq!(lattice_ceil(1.0 + 1e-14, 0.1), 1.0);
        assert!((lattice_ceil(1.01, 0.1) - 1.1).abs() < 1e-12);
        assert_eq!(lattice_ceil(0.0, 0.1), 0.0);
    }

    #[test]
    fn bounded_constant_profile() {
        let p = ExponentProfile::from_cells(ScaleKind::Mixed, 1, 1, (0.5, 0.01), vec![poly(1.0); 4]).unwrap();
        let v = classify(&p, &RegularSetSpec::<f64>::bounded(Arity::Double), &FitConfig::default()).unwrap();
        assert!(v.moderate && !v.negligible);
        let Some(Witness::Constant { c }) = v.domination.unwrap().witness else { panic!() };
        assert_eq!(c, 1.0);
    }

    #[test]
    fn insufficient_cells_are_indeterminate() {
        let mut cells = vec![poly(1.0); 3];
        cells.push(Some(CellFit::InsufficientData { usable: 2 }));
        let p = ExponentProfile::from_cells(ScaleKind::Mixed, 1, 1, (0.5, 0.01), cells).unwrap();
        let v = classify(&p, &RegularSetSpec::<f64>::all(Arity::Double), &FitConfig::default()).unwrap();
        assert!(v.indeterminate && !v.moderate && v.key().is_none());
    }

    #[test]
    fn arity_checked() {
        let p = ExponentProfile::from_cells(ScaleKind::Mixed, 0, 0, (0.5, 0.01), vec![poly(1.0)]).unwrap();
        assert!(classify(&p, &RegularSetSpec::<f64>::affine(), &FitConfig::default()).is_err());
    }
}
