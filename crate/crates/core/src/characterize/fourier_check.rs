use super::{
    clipped_exponent, measure_fourier, measure_spatial, verdicts_agree, CellCheck, CheckConfig, ConfigSnapshot,
    ReportStatus, TheoremId, TheoremReport,
};
use crate::asymptotics::classify;
use crate::error::{Error, Result};
use crate::nets::Net;
use crate::regular_sets::{project_col_zero, project_row_zero, Arity, RegularSetSpec};
use crate::scalar::Scalar;

/// Mixed-scale membership against `spec` versus the conjunction of
/// weight-scale membership against `R_0` and Fourier-weight membership
/// against `R^0`.
pub fn check_fourier<T: Scalar>(
    net: &Net<T>,
    spec: &RegularSetSpec<T>,
    config: &CheckConfig<T>,
) -> Result<TheoremReport<T>> {
    if spec.arity() != Arity::Double {
        return Err(Error::ArityMismatch {
            expected: "double",
            found: spec.arity().name(),
        });
    }
    let snapshot = ConfigSnapshot::of(config, net.dims());
    if !net.domain().is_whole_space() {
        return Ok(TheoremReport {
            theorem: TheoremId::FourierProp2,
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
    let fits = measure_spatial(net, config)?;
    let fourier = measure_fourier(net, config)?;
    let mixed = classify(&fits.mixed, spec, &config.fit)?;
    let weight = classify(&fits.weight, &project_col_zero(spec)?, &config.fit)?;
    let fourier_v = classify(&fourier, &project_row_zero(spec)?, &config.fit)?;
    let agree = verdicts_agree(&mixed, &[&weight, &fourier_v]);
    // sup |xi^beta u_hat| is bounded by the L^1 norm of d^beta u, so the
    // Fourier-weight exponent at order l cannot exceed the derivative
    // exponent at order l.
    let mut cells = Vec::new();
    for l in 0..=config.max_l.min(config.max_q) {
        let f = fourier.cell(0, l);
        let d = fits.derivative.cell(l, 0);
        let both_negligible = [f, d]
            .iter()
            .all(|c| c.and_then(|c| c.fit()).is_some_and(|f| f.decay_class.is_negligible()));
        if both_negligible {
            continue;
        }
        if let (Some(a), Some(b)) = (clipped_exponent(f), clipped_exponent(d)) {
            cells.push(CellCheck {
                q: l,
                l,
                relation: format!("F[{l}] <= N[{l},0]"),
                lhs: a,
                rhs: b,
                ok: a <= b + config.margin,
            });
        }
    }
    let mut notes: Vec<String> = fourier_v.notes.clone();
    if let Some(c) = cells.iter().find(|c| !c.ok) {
        notes.push(format!("first failing cell: {} ({:.3} > {:.3})", c.relation, c.lhs, c.rhs));
    }
    let status = match agree {
        None => ReportStatus::Indeterminate,
        Some(true) if cells.iter().all(|c| c.ok) => ReportStatus::Pass,
        Some(_) => ReportStatus::Fail,
    };
    Ok(TheoremReport {
        theorem: TheoremId::FourierProp2,
        net: net.label(),
        spec: spec.label(),
        status,
        lhs: Some(mixed),
        rhs: vec![weight, fourier_v],
        agree: agree.unwrap_or(false),
        cells,
        half_boxes: Vec::new(),
        directions: None,
        notes,
        config: snapshot,
    })
}
