use serde::Serialize;

use super::{measure_fourier, measure_spatial, CheckConfig, ConfigSnapshot, ReportStatus, TheoremId, TheoremReport};
use crate::asymptotics::{classify, ExponentProfile, ScaleKind};
use crate::error::Result;
use crate::nets::Net;
use crate::regular_sets::RegularSetSpec;
use crate::scalar::Scalar;

/// Both implications of a null characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NullDirections {
    /// Order-zero cell faster than every tested power.
    pub zeroth_negligible: bool,
    /// Every cell of the scale faster than every tested power.
    pub all_negligible: bool,
    /// zeroth => all.
    pub forward_holds: bool,
    /// all => zeroth.
    pub converse_holds: bool,
}

fn profile_for<T: Scalar>(net: &Net<T>, scale: ScaleKind, config: &CheckConfig<T>) -> Result<ExponentProfile> {
    match scale {
        ScaleKind::FourierWeight => measure_fourier(net, config),
        _ => {
            let fits = measure_spatial(net, config)?;
            Ok(match scale {
                ScaleKind::Mixed => fits.mixed,
                ScaleKind::Derivative => fits.derivative,
                _ => fits.weight,
            })
        }
    }
}

/// Null test against the full set of sequences of the scale's arity.
pub fn check_null<T: Scalar>(net: &Net<T>, scale: ScaleKind, config: &CheckConfig<T>) -> Result<TheoremReport<T>> {
    check_null_with(net, scale, &RegularSetSpec::all(scale.arity()), config)
}

/// For a net moderate with respect to `spec`, negligibility of the
/// order-zero seminorm is equivalent to negligibility of every seminorm of
/// the scale.
pub fn check_null_with<T: Scalar>(
    net: &Net<T>,
    scale: ScaleKind,
    spec: &RegularSetSpec<T>,
    config: &CheckConfig<T>,
) -> Result<TheoremReport<T>> {
    let theorem = TheoremId::null_for(scale);
    let snapshot = ConfigSnapshot::of(config, net.dims());
    if scale == ScaleKind::FourierWeight && !net.domain().is_whole_space() {
        return Ok(TheoremReport {
            theorem,
            net: net.label(),
            spec: spec.label(),
            status: ReportStatus::NotApplicable,
            lhs: None,
            rhs: Vec::new(),
            agree: false,
            cells: Vec::new(),
            half_boxes: Vec::new(),
            directions: None,
            notes: vec!["the Fourier scale is defined on R^n only".into()],
            config: snapshot,
        });
    }
    let profile = profile_for(net, scale, config)?;
    let verdict = classify(&profile, spec, &config.fit)?;
    let mut notes = Vec::new();
    let zeroth = profile.fit(0, 0).map(|f| f.decay_class.is_negligible());
    let all = profile
        .cells()
        .map(|(_, c)| c.fit().map(|f| f.decay_class.is_negligible()))
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.iter().all(|&b| b));
    let (status, directions) = match (verdict.indeterminate, zeroth, all) {
        (false, Some(z), Some(a)) if verdict.moderate => {
            let d = NullDirections {
                zeroth_negligible: z,
                all_negligible: a,
                forward_holds: !z || a,
                converse_holds: !a || z,
            };
            let status = if d.forward_holds && d.converse_holds {
                ReportStatus::Pass
            } else {
                ReportStatus::Fail
            };
            (status, Some(d))
        }
        (false, Some(_), Some(_)) => {
            notes.push(format!("net is not moderate with respect to {}", spec.label()));
            (ReportStatus::PreconditionFailed, None)
        }
        _ => {
            notes.push("some cells have insufficient data".into());
            (ReportStatus::Indeterminate, None)
        }
    };
    Ok(TheoremReport {
        theorem,
        net: net.label(),
        spec: spec.label(),
        status,
        lhs: None,
        rhs: vec![verdict],
        agree: status == ReportStatus::Pass,
        cells: Vec::new(),
        half_boxes: Vec::new(),
        directions,
        notes,
        config: snapshot,
    })
}
