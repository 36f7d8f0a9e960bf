use super::{
    clipped_exponent, measure_spatial, verdicts_agree, CellCheck, CheckConfig, ConfigSnapshot, HalfBoxReport,
    ReportStatus, SpatialFits, TheoremId, TheoremReport,
};
use crate::asymptotics::{classify, ExponentProfile, MembershipVerdict};
use crate::error::{Error, Result};
use crate::nets::Net;
use crate::regular_sets::{project_col_zero, project_row_zero, Arity, RegularSetSpec};
use crate::scalar::Scalar;

struct Verdicts<T> {
    mixed: MembershipVerdict<T>,
    derivative: MembershipVerdict<T>,
    weight: MembershipVerdict<T>,
}

fn verdicts<T: Scalar>(fits: &SpatialFits, spec: &RegularSetSpec<T>, config: &CheckConfig<T>) -> Result<Verdicts<T>> {
    Ok(Verdicts {
        mixed: classify(&fits.mixed, spec, &config.fit)?,
        derivative: classify(&fits.derivative, &project_row_zero(spec)?, &config.fit)?,
        weight: classify(&fits.weight, &project_col_zero(spec)?, &config.fit)?,
    })
}

/// `N_{q,l} <= N_{q,0} + N_{0,l}` and the first-derivative step of the
/// proof, `N_{1,k} <= N_{0,k} + N_{2,0}`, on clipped exponents.
fn cell_checks(mixed: &ExponentProfile, margin: f64) -> Vec<CellCheck> {
    let n = |q, l| clipped_exponent(mixed.cell(q, l));
    let mut out = Vec::new();
    for q in 0..=mixed.max_q {
        for l in 0..=mixed.max_l {
            if q == 0 || l == 0 {
                continue;
            }
            if let (Some(a), Some(b), Some(c)) = (n(q, l), n(q, 0), n(0, l)) {
                out.push(CellCheck {
                    q,
                    l,
                    relation: format!("N[{q},{l}] <= N[{q},0] + N[0,{l}]"),
                    lhs: a,
                    rhs: b + c,
                    ok: a <= b + c + margin,
                });
            }
        }
    }
    if mixed.max_q >= 2 {
        for k in 0..=mixed.max_l {
            if let (Some(a), Some(b), Some(c)) = (n(1, k), n(0, k), n(2, 0)) {
                out.push(CellCheck {
                    q: 1,
                    l: k,
                    relation: format!("N[1,{k}] <= N[0,{k}] + N[2,0]"),
                    lhs: a,
                    rhs: b + c,
                    ok: a <= b + c + margin,
                });
            }
        }
    }
    out
}

/// Mixed-scale membership against `spec` versus the conjunction of
/// derivative-scale membership against `R^0` and weight-scale membership
/// against `R_0`.
pub fn check_intersection<T: Scalar>(
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
    let fits = measure_spatial(net, config)?;
    let v = verdicts(&fits, spec, config)?;
    let agree = verdicts_agree(&v.mixed, &[&v.derivative, &v.weight]);
    let cells = cell_checks(&fits.mixed, config.margin);
    let mut notes = Vec::new();
    let mut half_boxes = Vec::new();
    if config.half_boxes {
        if let Some((neg, pos)) = net.domain().split_first_axis() {
            for (side, domain) in [("x1<0", neg), ("x1>0", pos)] {
                let half = net.with_domain(domain)?;
                let hv = verdicts(&measure_spatial(&half, config)?, spec, config)?;
                let half_agree = verdicts_agree(&hv.mixed, &[&hv.derivative, &hv.weight]).unwrap_or(false);
                half_boxes.push(HalfBoxReport {
                    side,
                    mixed: hv.mixed,
                    rhs: vec![hv.derivative, hv.weight],
                    agree: half_agree,
                });
            }
        }
    }
    let status = match agree {
        None => ReportStatus::Indeterminate,
        Some(true) if cells.iter().all(|c| c.ok) => ReportStatus::Pass,
        Some(_) => ReportStatus::Fail,
    };
    if let Some(c) = cells.iter().find(|c| !c.ok) {
        notes.push(format!("first failing cell ({},{}): {} ({:.3} > {:.3})", c.q, c.l, c.relation, c.lhs, c.rhs));
    }
    Ok(TheoremReport {
        theorem: TheoremId::IntersectionTh10,
        net: net.label(),
        spec: spec.label(),
        status,
        lhs: Some(v.mixed),
        rhs: vec![v.derivative, v.weight],
        agree: agree.unwrap_or(false),
        cells,
        half_boxes,
        directions: None,
        notes,
        config: ConfigSnapshot::of(config, net.dims()),
    })
}
