//! Nets `(u_eps)` of smooth functions on boxes, their derivatives, and the
//! weighted seminorms `sup |x^beta d^alpha u_eps|`.
//!
//! Builtin nets are separable: an `eps`-dependent amplitude times one
//! factor per axis. Sups over tensor grids then reduce to products of
//! per-axis sups, which is exact in floating point because rounded
//! multiplication of non-negative numbers is monotone.

mod domain;
mod factor;
mod grid;
mod poly;
pub mod spectral;
pub mod stencil;
mod sweep;
mod tabulated;

use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

pub use domain::{BoxDomain, EpsilonGrid, Interval, MAX_DIMS};
pub use domain::check_eps;
pub use factor::{Amplitude, Factor, ANALYTIC_ORDER_CAP};
pub(crate) use factor::FactorKernel;
pub use grid::{AxisGrid, GridPolicy, SampleGrid};
pub use sweep::{seminorm_sweep, AxisTable};
pub use tabulated::{TabSlice, TabulatedNet};

/// Default cap on derivative orders.
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    #[default]
    Analytic,
    FiniteDifference,
    Spectral,
}

impl DerivativeMode {
    pub fn label(self) -> &'static str {
        match self {
            DerivativeMode::Analytic => "analytic",
            DerivativeMode::FiniteDifference => "finite_difference",
            DerivativeMode::Spectral => "spectral",
        }
    }
}

/// Builtin families; in `n` dimensions the same factor is used on every
/// axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family<T> {
    /// `eps^{-p} exp(-x^2)`.
    GaussianPeak { p: T },
    /// `eps^{-p} phi(x / eps)`.
    DeltaNet { p: T },
    /// `exp(i x / eps) phi(x)`.
    Oscillatory,
    /// `exp(-1/eps) phi(x)`.
    SuperSmall,
    /// `eps^{-p} x^d exp(-x^2)`.
    PolyWeight { p: T, d: u32 },
    /// Amplitude times one explicit factor per axis.
    Product {
        amplitude: Amplitude<T>,
        factors: Vec<Factor<T>>,
    },
    Tabulated(TabulatedNet<T>),
}

impl<T: Scalar> Family<T> {
    pub fn label(&self) -> String {
        match self {
            Family::GaussianPeak { p } => format!("GaussianPeak({p})"),
            Family::DeltaNet { p } => format!("DeltaNet({p})"),
            Family::Oscillatory => "Oscillatory".into(),
            Family::SuperSmall => "SuperSmall".into(),
            Family::PolyWeight { p, d } => format!("PolyWeight({p},{d})"),
            Family::Product { amplitude, factors } => {
                let mut s = format!("eps^{}", -amplitude.power);
                if amplitude.exp_small {
                    s.push_str("*exp(-1/eps)");
                }
                for f in factors {
                    s.push('*');
                    s.push_str(&f.label());
                }
                s
            }
            Family::Tabulated(t) => format!("Tabulated({})", t.source),
        }
    }

    fn separable(&self, dims: usize) -> Option<(Amplitude<T>, Vec<Factor<T>>)> {
        let same = |a: Amplitude<T>, f: Factor<T>| Some((a, vec![f; dims]));
        match self {
            Family::GaussianPeak { p } => same(Amplitude::power(*p), Factor::gaussian()),
            Family::DeltaNet { p } => same(Amplitude::power(*p), Factor::ScaledBump),
            Family::Oscillatory => same(Amplitude::power(T::zero()), Factor::ModulatedBump),
            Family::SuperSmall => same(Amplitude::exp_small(), Factor::Bump),
            Family::PolyWeight { p, d } => same(
                Amplitude::power(*p),
                Factor::PolyGauss {
                    degree: *d,
                    rate: T::one(),
                },
            ),
            Family::Product { amplitude, factors } => Some((*amplitude, factors.clone())),
            Family::Tabulated(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
enum Repr<T> {
    Separable {
        amplitude: Amplitude<T>,
        kernels: Vec<FactorKernel<T>>,
    },
    Tabulated(TabulatedNet<T>),
}

/// A net on a box together with the way its derivatives are computed.
#[derive(Clone, Debug)]
pub struct Net<T> {
    domain: BoxDomain<T>,
    family: Family<T>,
    mode: DerivativeMode,
    reflected: bool,
    max_order: usize,
    repr: Repr<T>,
}

/// Values of a net (or a derivative) on a tensor grid, last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct NetValues<T> {
    pub shape: Vec<usize>,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> NetValues<T> {
    pub fn modulus(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn real(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }
}

/// A seminorm value with the grid node attaining it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormValue<T> {
    pub value: T,
    pub argmax: Vec<T>,
}

impl<T: Scalar> Net<T> {
    pub fn new(family: Family<T>, domain: BoxDomain<T>, mode: DerivativeMode) -> Result<Self> {
        let dims = domain.dims();
        let repr = match family.separable(dims) {
            Some((amplitude, factors)) => {
                if factors.len() != dims {
                    return Err(Error::InvalidParameter(format!(
                        "{} factors given for a {dims}-dimensional box",
                        factors.len()
                    )));
                }
                if !amplitude.power.is_finite() {
                    return Err(Error::InvalidParameter("amplitude power must be finite".into()));
                }
                for (axis, f) in factors.iter().enumerate() {
                    if let Factor::PolyGauss { rate, degree } = f {
                        if !(*rate >= T::zero()) || !rate.is_finite() {
                            return Err(Error::InvalidParameter(format!(
                                "axis {axis}: Gaussian rate must be finite and >= 0"
                            )));
                        }
                        if *rate == T::zero() && !domain.interval(axis).is_bounded() {
                            return Err(Error::InvalidParameter(format!(
                                "axis {axis}: x^{degree} without Gaussian decay needs a bounded interval"
                            )));
                        }
                    }
                }
                Repr::Separable {
                    amplitude,
                    kernels: factors.into_iter().map(FactorKernel::new).collect(),
                }
            }
            None => {
                let Family::Tabulated(t) = &family else { unreachable!() };
                if mode == DerivativeMode::Analytic {
                    return Err(Error::ModeNotAdmissible {
                        mode: mode.label(),
                        reason: "tabulated nets have no closed-form derivatives".into(),
                    });
                }
                if dims != 1 {
                    return Err(Error::Tabulated("tabulated nets are one-dimensional".into()));
                }
                for s in &t.slices {
                    SampleGrid::new(vec![AxisGrid::from_nodes(s.nodes.clone())?]).check_within(&domain)?;
                }
                Repr::Tabulated(t.clone())
            }
        };
        Ok(Self {
            domain,
            family,
            mode,
            reflected: false,
            max_order: DEFAULT_MAX_ORDER,
            repr,
        })
    }

    pub fn on_real_line(family: Family<T>) -> Result<Self> {
        Self::new(family, BoxDomain::whole_space(1)?, DerivativeMode::Analytic)
    }

    pub fn with_max_order(mut self, max_order: usize) -> Result<Self> {
        if self.mode == DerivativeMode::Analytic && max_order > ANALYTIC_ORDER_CAP {
            return Err(Error::OrderTooHigh {
                order: max_order,
                cap: ANALYTIC_ORDER_CAP,
            });
        }
        self.max_order = max_order;
        Ok(self)
    }

    pub fn with_mode(&self, mode: DerivativeMode) -> Result<Self> {
        let mut net = Self::new(self.family.clone(), self.domain.clone(), mode)?;
        net.reflected = self.reflected;
        net.max_order = self.max_order;
        Ok(net)
    }

    /// The same net restricted to another box.
    pub fn with_domain(&self, domain: BoxDomain<T>) -> Result<Self> {
        let mut net = Self::new(self.family.clone(), domain, self.mode)?;
        net.reflected = self.reflected;
        net.max_order = self.max_order;
        Ok(net)
    }

    /// `v_eps(x) = u_eps(-x_1, x')` on the mirrored box.
    pub fn reflected(&self) -> Result<Self> {
        if matches!(self.repr, Repr::Tabulated(_)) {
            return Err(Error::NotApplicable("reflection of tabulated nets".into()));
        }
        let mut net = self.clone();
        net.domain = self.domain.mirrored_first_axis();
        net.reflected = !self.reflected;
        Ok(net)
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn dims(&self) -> usize {
        self.domain.dims()
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.repr, Repr::Tabulated(_))
    }

    pub fn tabulated(&self) -> Option<&TabulatedNet<T>> {
        match &self.repr {
            Repr::Tabulated(t) => Some(t),
            Repr::Separable { .. } => None,
        }
    }

    pub fn is_complex(&self) -> bool {
        match &self.repr {
            Repr::Separable { kernels, .. } => kernels.iter().any(|k| k.factor.is_complex()),
            Repr::Tabulated(t) => t.is_complex(),
        }
    }

    pub fn label(&self) -> String {
        let mut s = self.family.label();
        if self.reflected {
            s.push_str("[reflected]");
        }
        s
    }

    /// `eps`-dependent scalar in front of the factors (1 for tabulated nets).
    pub fn amplitude(&self, eps: T) -> T {
        match &self.repr {
            Repr::Separable { amplitude, .. } => amplitude.value(eps),
            Repr::Tabulated(_) => T::one(),
        }
    }

    /// Amplitude and factor kernels with the reflection folded in, for the
    /// analytic Taylor and Fourier code paths.
    pub(crate) fn separable_parts(&self) -> Option<(Amplitude<T>, &[FactorKernel<T>])> {
        match &self.repr {
            Repr::Separable { amplitude, kernels } => Some((*amplitude, kernels)),
            Repr::Tabulated(_) => None,
        }
    }

    /// Grid adapted to `eps`: compact supports are resolved by the full node
    /// budget, Gaussian tails are cut where every tracked weighted
    /// derivative has decayed below `tail_tol / 100` of its peak.
    pub fn grid(&self, eps: T, policy: &GridPolicy, max_q: usize, max_l: usize) -> Result<SampleGrid<T>> {
        check_eps(eps)?;
        policy.validate()?;
        let intervals = policy.intervals_for(self.dims()).max(policy.min_support_nodes);
        let rel_tol = lit::<T>(policy.tail_tol * 1e-2);
        let mut axes = Vec::with_capacity(self.dims());
        for axis in 0..self.dims() {
            let domain = self.domain.interval(axis);
            let grid = match &self.repr {
                Repr::Tabulated(t) => {
                    let mut g = AxisGrid::from_nodes(t.slice(eps)?.nodes.clone())?;
                    if domain.lo.is_infinite() {
                        g.cut_lo = Some(g.nodes[0]);
                    }
                    if domain.hi.is_infinite() {
                        g.cut_hi = g.nodes.last().copied();
                    }
                    g
                }
                Repr::Separable { kernels, .. } => {
                    let kernel = &kernels[axis];
                    let flip = self.reflected && axis == 0;
                    if let Some((a, b)) = kernel.factor.support(eps) {
                        let (a, b) = if flip { (-b, -a) } else { (a, b) };
                        let lo = a.max(domain.lo);
                        let hi = b.min(domain.hi);
                        if !(lo < hi) {
                            return Err(Error::InvalidParameter(format!(
                                "axis {axis}: the factor vanishes identically on the domain"
                            )));
                        }
                        AxisGrid::uniform(lo, hi, intervals, domain)?
                    } else if let Some(r) = kernel.decay_radius(max_q, max_l, rel_tol) {
                        let lo = (-r).max(domain.lo);
                        let hi = r.min(domain.hi);
                        if !(lo < hi) {
                            return Err(Error::InvalidParameter(format!(
                                "axis {axis}: the domain lies in the negligible tail"
                            )));
                        }
                        let mut g = AxisGrid::uniform(lo, hi, intervals, domain)?;
                        if domain.lo < -r {
                            g.cut_lo = Some(g.nodes[0]);
                        }
                        if domain.hi > r {
                            g.cut_hi = g.nodes.last().copied();
                        }
                        g
                    } else {
                        if !domain.is_bounded() {
                            return Err(Error::InvalidParameter(format!(
                                "axis {axis}: non-decaying factor on an unbounded interval"
                            )));
                        }
                        AxisGrid::uniform(domain.lo, domain.hi, intervals, domain)?
                    }
                }
            };
            axes.push(grid);
        }
        Ok(SampleGrid::new(axes))
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::OrderTooHigh {
                order,
                cap: self.max_order,
            });
        }
        Ok(())
    }

    /// `f_axis^(q)` on the axis nodes for `q = 0..=max_q`, amplitude
    /// excluded.
    pub(crate) fn axis_derivatives(
        &self,
        axis: usize,
        eps: T,
        grid: &AxisGrid<T>,
        max_q: usize,
    ) -> Result<Vec<Vec<Complex<T>>>> {
        self.check_order(max_q)?;
        let samples: Vec<Complex<T>> = match &self.repr {
            Repr::Tabulated(t) => {
                let slice = t.slice(eps)?;
                if slice.nodes.len() != grid.len()
                    || slice.nodes.iter().zip(&grid.nodes).any(|(a, b)| a != b)
                {
                    return Err(Error::Tabulated("tabulated nets are evaluated on their own nodes".into()));
                }
                slice.values.clone()
            }
            Repr::Separable { kernels, .. } => {
                let kernel = &kernels[axis];
                let flip = self.reflected && axis == 0;
                if self.mode == DerivativeMode::Analytic {
                    return Ok((0..=max_q)
                        .map(|q| {
                            let sign = if flip && q % 2 == 1 { -T::one() } else { T::one() };
                            grid.nodes
                                .iter()
                                .map(|&x| {
                                    let x = if flip { -x } else { x };
                                    kernel.derivative(q, x, eps) * sign
                                })
                                .collect()
                        })
                        .collect());
                }
                grid.nodes
                    .iter()
                    .map(|&x| kernel.derivative(0, if flip { -x } else { x }, eps))
                    .collect()
            }
        };
        (0..=max_q)
            .map(|q| match self.mode {
                DerivativeMode::Spectral => spectral::differentiate(&samples, grid.spacing, q),
                _ => Ok(stencil::differentiate(&samples, grid.spacing, q)),
            })
            .collect()
    }

    fn tensor(&self, eps: T, alpha: &[usize], grid: &SampleGrid<T>) -> Result<NetValues<T>> {
        check_eps(eps)?;
        grid.check_within(&self.domain)?;
        if alpha.len() != self.dims() {
            return Err(Error::InvalidParameter(format!(
                "multi-index has {} entries for a {}-dimensional net",
                alpha.len(),
                self.dims()
            )));
        }
        self.check_order(alpha.iter().sum())?;
        let per_axis: Vec<Vec<Complex<T>>> = alpha
            .iter()
            .enumerate()
            .map(|(axis, &q)| {
                self.axis_derivatives(axis, eps, &grid.axes[axis], q)
                    .map(|mut d| d.swap_remove(q))
            })
            .collect::<Result<_>>()?;
        let amp = Complex::new(self.amplitude(eps), T::zero());
        let mut values = vec![amp];
        for axis in &per_axis {
            values = values
                .iter()
                .flat_map(|&acc| axis.iter().map(move |&v| acc * v))
                .collect();
        }
        Ok(NetValues {
            shape: grid.axes.iter().map(AxisGrid::len).collect(),
            values,
        })
    }

    /// `u_eps` at every node of `grid`.
    pub fn evaluate(&self, eps: T, grid: &SampleGrid<T>) -> Result<NetValues<T>> {
        self.tensor(eps, &vec![0; self.dims()], grid)
    }

    /// `d^alpha u_eps` at every node of `grid`.
    pub fn derivative(&self, eps: T, alpha: &[usize], grid: &SampleGrid<T>) -> Result<NetValues<T>> {
        self.tensor(eps, alpha, grid)
    }

    /// `max_grid |x^beta d^alpha u_eps(x)|` and the node attaining it.
    pub fn seminorm(
        &self,
        eps: T,
        alpha: &[usize],
        beta: &[usize],
        grid: &SampleGrid<T>,
        policy: &GridPolicy,
    ) -> Result<SeminormValue<T>> {
        check_eps(eps)?;
        grid.check_within(&self.domain)?;
        if alpha.len() != self.dims() || beta.len() != self.dims() {
            return Err(Error::InvalidParameter("multi-index length differs from dimension".into()));
        }
        self.check_order(alpha.iter().sum())?;
        let max_q = *alpha.iter().max().unwrap();
        let max_l = *beta.iter().max().unwrap();
        let mut value = self.amplitude(eps);
        let mut argmax = Vec::with_capacity(self.dims());
        for axis in 0..self.dims() {
            let table = AxisTable::build(self, axis, eps, &grid.axes[axis], max_q, max_l, policy)?;
            let (v, i) = table.get(alpha[axis], beta[axis]);
            value *= v;
            argmax.push(grid.axes[axis].nodes[i]);
        }
        Ok(SeminormValue { value, argmax })
    }
}

/// All multi-indices of length `dims` with entries summing to `total`.
pub fn compositions(total: usize, dims: usize) -> Vec<Vec<usize>> {
    if dims == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, dims - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_line(family: Family<f64>) -> Net<f64> {
        Net::on_real_line(family).unwrap()
    }

    fn single_node(x: f64) -> SampleGrid<f64> {
        SampleGrid::new(vec![AxisGrid {
            nodes: vec![x, x + 1e-3],
            spacing: 1e-3,
            cut_lo: None,
            cut_hi: None,
        }])
    }

    #[test]
    fn pointwise_values() {
        let gp = real_line(Family::GaussianPeak { p: 1.0 });
        assert_eq!(gp.evaluate(0.5, &single_node(0.0)).unwrap().values[0].re, 2.0);
        let ss = real_line(Family::SuperSmall);
        let v = ss.evaluate(0.1, &single_node(0.0)).unwrap().values[0].re;
        assert!((v - (-10.0f64).exp() * (-1.0f64).exp()).abs() < 1e-20);
        let dn = real_line(Family::DeltaNet { p: 1.0 });
        assert_eq!(dn.evaluate(0.25, &single_node(0.5)).unwrap().values[0].re, 0.0);
        let g0 = real_line(Family::GaussianPeak { p: 0.0 });
        assert_eq!(g0.derivative(0.5, &[2], &single_node(0.0)).unwrap().values[0].re, -2.0);
        assert_eq!(gp.derivative(0.5, &[1], &single_node(0.0)).unwrap().values[0].re, 0.0);
    }

    #[test]
    fn errors() {
        let gp = real_line(Family::GaussianPeak { p: 1.0 });
        assert!(matches!(gp.evaluate(1.5, &single_node(0.0)), Err(Error::EpsOutOfRange(_))));
        assert!(matches!(
            gp.derivative(0.5, &[5], &single_node(0.0)),
            Err(Error::OrderTooHigh { .. })
        ));
        let half = gp
            .with_domain(BoxDomain::new(vec![Interval::positive_half_line()]).unwrap())
            .unwrap();
        assert!(matches!(half.evaluate(0.5, &single_node(-1.0)), Err(Error::GridOutsideDomain { .. })));
        let spectral = Net::new(
            Family::Product {
                amplitude: Amplitude::power(0.0),
                factors: vec![Factor::PolyGauss { degree: 1, rate: 0.0 }],
            },
            BoxDomain::new(vec![Interval::new(-1.0, 1.0).unwrap()]).unwrap(),
            DerivativeMode::Spectral,
        )
        .unwrap();
        let grid = spectral.grid(0.5, &GridPolicy::default(), 1, 0).unwrap();
        assert!(matches!(spectral.derivative(0.5, &[1], &grid), Err(Error::BoundaryNotSmall(_))));
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 3).len(), 10);
    }

    #[test]
    fn peak_seminorm() {
        let gp = real_line(Family::GaussianPeak { p: 1.0 });
        let policy = GridPolicy::default();
        for eps in [0.5, 0.1, 0.01] {
            let grid = gp.grid(eps, &policy, 0, 0).unwrap();
            let s = gp.seminorm(eps, &[0], &[0], &grid, &policy).unwrap();
            assert_eq!(s.value, 1.0 / eps);
            assert_eq!(s.argmax, vec![0.0]);
        }
    }
}
