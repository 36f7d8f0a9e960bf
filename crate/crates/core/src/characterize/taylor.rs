use serde::Serialize;

use super::{clipped_exponent, measure_spatial, CheckConfig};
use crate::error::{Error, Result};
use crate::nets::{FactorKernel, Net, SampleGrid};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Absolute tolerance on the pointwise bound.
pub const DEFAULT_TAYLOR_TOL: f64 = 1e-9;

/// Samples per segment when bounding `sup |d_i^2 u|` on `[x, x + h]`.
const SEGMENT_SAMPLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Ok,
    /// `x + h == x` in floating point at some tested node.
    StepUnresolvable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub eps: f64,
    pub axis: usize,
    pub m: u32,
    pub n2: f64,
    pub h: f64,
    pub nodes_tested: usize,
    pub nodes_unresolvable: usize,
    /// `max(|d_i u| - rhs, 0)` over tested nodes.
    pub max_violation: f64,
    /// `max_violation / max |d_i u|`.
    pub max_relative_violation: f64,
    pub worst_node: Option<f64>,
    pub status: BoundStatus,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.status == BoundStatus::Ok && self.max_violation <= self.tolerance
    }
}

/// Checks `|d_i u(x)| <= |u(x + h e_i) - u(x)| / h + (h/2) sup_{[x, x+h]} |d_i^2 u|`
/// with `h = eps^{N2 + m}` at every node of `grid` whose shifted point stays
/// in the domain. The sup over the segment is taken over sampled values plus
/// a Lipschitz correction from the third derivative.
pub fn taylor_derivative_bound<T: Scalar>(
    net: &Net<T>,
    eps: T,
    axis: usize,
    m: u32,
    n2: f64,
    grid: &SampleGrid<T>,
    tolerance: f64,
) -> Result<BoundReport> {
    let (amplitude, kernels) = net
        .separable_parts()
        .ok_or_else(|| Error::NotApplicable("the Taylor bound needs closed-form derivatives".into()))?;
    if axis >= net.dims() {
        return Err(Error::InvalidParameter(format!("axis {axis} out of range for a {}-dimensional net", net.dims())));
    }
    if grid.dims() != net.dims() {
        return Err(Error::GridDimension { grid: grid.dims(), net: net.dims() });
    }
    if !(n2.is_finite() && n2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("N2 must be finite and non-negative, got {n2}")));
    }
    grid.check_within(net.domain())?;
    let h = eps.powf(lit::<T>(n2 + f64::from(m)));
    let flip = net.is_reflected() && axis == 0;
    let kernel = &kernels[axis];
    let eval = |k: usize, x: T| -> T {
        if flip {
            kernel.derivative(k, -x, eps).norm()
        } else {
            kernel.derivative(k, x, eps).norm()
        }
    };
    let increment = |x: T, step: T| -> T {
        if flip {
            kernel.increment(-x, -step, eps).norm()
        } else {
            kernel.increment(x, step, eps).norm()
        }
    };

    // |u| = |A| * |f_axis| * prod_{j != axis} |f_j|, so a violation on the
    // line is scaled by the largest constant from the other axes.
    let mut line_scale = amplitude.value(eps).abs();
    for (j, other) in kernels.iter().enumerate().filter(|(j, _)| *j != axis) {
        line_scale *= other_axis_max(other, &grid.axes[j].nodes, eps, net.is_reflected() && j == 0);
    }

    let interval = net.domain().interval(axis);
    let mut report = BoundReport {
        eps: to_f64(eps),
        axis,
        m,
        n2,
        h: to_f64(h),
        nodes_tested: 0,
        nodes_unresolvable: 0,
        max_violation: 0.0,
        max_relative_violation: 0.0,
        worst_node: None,
        status: BoundStatus::Ok,
        tolerance,
        notes: Vec::new(),
    };
    let mut max_lhs = T::zero();
    let mut worst = T::zero();
    for &x in &grid.axes[axis].nodes {
        let shifted = x + h;
        if !interval.contains(shifted) {
            continue;
        }
        let step = shifted - x;
        if step == T::zero() {
            report.nodes_unresolvable += 1;
            continue;
        }
        report.nodes_tested += 1;
        let delta = step / from_usize::<T>(SEGMENT_SAMPLES);
        let mut sup2 = T::zero();
        let mut sup3 = T::zero();
        for s in 0..=SEGMENT_SAMPLES {
            let t = x + delta * from_usize::<T>(s);
            sup2 = sup2.max(eval(2, t));
            sup3 = sup3.max(eval(3, t));
        }
        let segment_sup = sup2 + delta * lit::<T>(0.5) * sup3;
        let lhs = eval(1, x);
        let rhs = increment(x, step) / step + step * lit::<T>(0.5) * segment_sup;
        max_lhs = max_lhs.max(lhs);
        let excess = lhs - rhs;
        if excess > worst {
            worst = excess;
            report.worst_node = Some(to_f64(x));
        }
    }
    report.max_violation = to_f64(worst * line_scale);
    if max_lhs > T::zero() {
        report.max_relative_violation = to_f64(worst / max_lhs);
    }
    if report.nodes_unresolvable > 0 {
        report.status = BoundStatus::StepUnresolvable;
        report.notes.push(format!(
            "step h = {:e} vanishes against {} node(s); use a smaller m",
            report.h, report.nodes_unresolvable
        ));
    }
    if report.nodes_tested == 0 && report.nodes_unresolvable == 0 {
        report.notes.push("no node leaves room for the step inside the domain".into());
    }
    Ok(report)
}

fn other_axis_max<T: Scalar>(kernel: &FactorKernel<T>, nodes: &[T], eps: T, flip: bool) -> T {
    nodes
        .iter()
        .map(|&x| kernel.derivative(0, if flip { -x } else { x }, eps).norm())
        .fold(T::zero(), T::max)
}

/// Runs the bound for every `eps` of the grid, every axis and every `m`,
/// with `N2` taken from the fitted second-order mixed exponent.
pub fn taylor_sweep<T: Scalar>(net: &Net<T>, config: &CheckConfig<T>, m_values: &[u32]) -> Result<Vec<BoundReport>> {
    if net.is_tabulated() {
        return Err(Error::NotApplicable("the Taylor bound needs closed-form derivatives".into()));
    }
    let mut cfg = config.clone();
    cfg.max_q = cfg.max_q.max(2);
    cfg.max_l = 0;
    let fits = measure_spatial(net, &cfg)?;
    let n2 = clipped_exponent(fits.mixed.cell(2, 0)).unwrap_or(0.0);
    let mut out = Vec::new();
    for eps in config.eps_grid.values() {
        let grid = net.grid(eps, &config.grid, 3, 0)?;
        for axis in 0..net.dims() {
            for &m in m_values {
                out.push(taylor_derivative_bound(net, eps, axis, m, n2, &grid, config.taylor_tol)?);
            }
        }
    }
    Ok(out)
}
