//! Unitary Fourier transform `u_hat(xi) = (2 pi)^{-n/2} int e^{-i x xi} u(x) dx`
//! of nets on `R^n`, by the trapezoid rule evaluated with an FFT.
//!
//! On an axis with nodes `x_j = x_0 + j h`, `j < M`, the transform is
//! sampled at `xi_k = k 2 pi / (P h)` for `|k| <= K`, `P = 2K + 1 >= M`:
//! `u_hat(xi_k) = (2 pi)^{-1/2} h e^{-i xi_k x_0} DFT_P(u)_k`, the samples
//! zero-padded to length `P`. The inverse uses the conjugate kernel with
//! the same normalization, which makes the discrete round trip and
//! Parseval identity exact up to rounding.

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{GridMeta, ScaleKind, SeminormProfile};
use crate::error::{Error, Result};
use crate::nets::{check_eps, compositions, AxisGrid, EpsilonGrid, GridPolicy, Net, SampleGrid, SeminormValue};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FourierConfig {
    /// Frequencies per axis (odd); `None` uses the smallest odd count
    /// `>= 2M + 1` for `M` spatial nodes.
    pub xi_count: Option<usize>,
    /// Spatial samples at cut ends must be below this fraction of the peak.
    pub tail_tol: f64,
    /// Spectrum in the outer 5% of the frequency range must be below this
    /// fraction of the peak, else a warning is attached.
    pub spectral_tail_tol: f64,
}

impl Default for FourierConfig {
    fn default() -> Self {
        Self {
            xi_count: None,
            tail_tol: 1e-14,
            spectral_tail_tol: 1e-12,
        }
    }
}

/// Spectrum of one axis factor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisSpectrum<T> {
    pub xi: Vec<T>,
    #[serde(skip)]
    pub values: Vec<Complex<T>>,
    pub spacing: T,
    pub spatial_nodes: usize,
    pub spatial_spacing: T,
    pub x0: T,
}

/// `u_hat_eps` on a tensor frequency grid, stored as the amplitude times
/// one spectrum per axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSamples<T> {
    pub eps: T,
    pub amplitude: T,
    pub axes: Vec<AxisSpectrum<T>>,
    pub truncation: Vec<(Option<f64>, Option<f64>)>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> SpectralSamples<T> {
    pub fn value(&self, idx: &[usize]) -> Complex<T> {
        self.axes
            .iter()
            .zip(idx)
            .fold(Complex::new(self.amplitude, T::zero()), |acc, (a, &i)| acc * a.values[i])
    }

    /// All values, last axis fastest.
    pub fn dense(&self) -> Vec<Complex<T>> {
        let mut values = vec![Complex::new(self.amplitude, T::zero())];
        for axis in &self.axes {
            values = values
                .iter()
                .flat_map(|&acc| axis.values.iter().map(move |&v| acc * v))
                .collect();
        }
        values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.xi.len()).collect()
    }
}

fn whole_space<T: Scalar>(net: &Net<T>) -> Result<()> {
    if !net.domain().is_whole_space() {
        return Err(Error::NotApplicable(
            "the Fourier transform is taken over R^n only".into(),
        ));
    }
    Ok(())
}

fn xi_count(config: &FourierConfig, nodes: usize) -> Result<usize> {
    match config.xi_count {
        Some(p) if p % 2 == 0 || p < nodes => Err(Error::InvalidParameter(format!(
            "xi_count = {p} must be odd and at least the {nodes} spatial nodes"
        ))),
        Some(p) => Ok(p),
        None => Ok(2 * nodes + 1),
    }
}

fn axis_transform<T: Scalar>(
    samples: &[Complex<T>],
    grid: &AxisGrid<T>,
    p: usize,
    planner: &mut FftPlanner<T>,
) -> AxisSpectrum<T> {
    let h = grid.spacing;
    let x0 = grid.nodes[0];
    let mut buf = vec![Complex::new(T::zero(), T::zero()); p];
    buf[..samples.len()].copy_from_slice(samples);
    planner.plan_fft_forward(p).process(&mut buf);
    let k_max = (p - 1) / 2;
    let dxi = lit::<T>(2.0) * T::PI() / (from_usize::<T>(p) * h);
    let norm = h / (lit::<T>(2.0) * T::PI()).sqrt();
    let mut xi = Vec::with_capacity(p);
    let mut values = Vec::with_capacity(p);
    for s in 0..p {
        let k = s as i64 - k_max as i64;
        let idx = k.rem_euclid(p as i64) as usize;
        let xk = lit::<T>(k as f64) * dxi;
        let (sn, cs) = (xk * x0).sin_cos();
        xi.push(xk);
        values.push(buf[idx] * Complex::new(cs, -sn) * norm);
    }
    AxisSpectrum {
        xi,
        values,
        spacing: dxi,
        spatial_nodes: samples.len(),
        spatial_spacing: h,
        x0,
    }
}

/// Inverse transform of one axis spectrum back onto its spatial nodes.
fn axis_inverse<T: Scalar>(spec: &AxisSpectrum<T>, planner: &mut FftPlanner<T>) -> Vec<Complex<T>> {
    let p = spec.xi.len();
    let k_max = (p - 1) / 2;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); p];
    for (s, (&xk, &v)) in spec.xi.iter().zip(&spec.values).enumerate() {
        let k = s as i64 - k_max as i64;
        let (sn, cs) = (xk * spec.x0).sin_cos();
        buf[k.rem_euclid(p as i64) as usize] = v * Complex::new(cs, sn);
    }
    planner.plan_fft_inverse(p).process(&mut buf);
    let norm = spec.spacing / (lit::<T>(2.0) * T::PI()).sqrt();
    buf.truncate(spec.spatial_nodes);
    buf.into_iter().map(|v| v * norm).collect()
}

fn check_spatial_tail<T: Scalar>(axis: usize, samples: &[Complex<T>], grid: &AxisGrid<T>, tol: f64) -> Result<()> {
    let peak = samples.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    if peak == T::zero() {
        return Ok(());
    }
    for (cut, v) in [(grid.cut_lo, samples[0]), (grid.cut_hi, samples[samples.len() - 1])] {
        if cut.is_some() {
            let ratio = v.norm() / peak;
            if ratio > lit(tol) {
                return Err(Error::TailCriterion {
                    axis,
                    ratio: to_f64(ratio),
                    tolerance: tol,
                });
            }
        }
    }
    Ok(())
}

fn spectral_tail_warning<T: Scalar>(axis: usize, spec: &AxisSpectrum<T>, tol: f64) -> Option<String> {
    let peak = spec.values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    if peak == T::zero() {
        return None;
    }
    let p = spec.values.len();
    let edge = (p / 40).max(1);
    let outer = spec.values[..edge]
        .iter()
        .chain(&spec.values[p - edge..])
        .map(|v| v.norm())
        .fold(T::zero(), T::max);
    let ratio = to_f64(outer / peak);
    (ratio > tol).then(|| {
        format!("axis {axis}: spectrum at the frequency edge is {ratio:.2e} of its peak")
    })
}

/// Samples of `u_hat_eps` on the frequency grid induced by `grid`.
pub fn transform<T: Scalar>(
    net: &Net<T>,
    eps: T,
    grid: &SampleGrid<T>,
    config: &FourierConfig,
) -> Result<SpectralSamples<T>> {
    whole_space(net)?;
    check_eps(eps)?;
    grid.check_within(net.domain())?;
    let mut planner = FftPlanner::new();
    let mut axes = Vec::with_capacity(grid.dims());
    let mut warnings = Vec::new();
    for (axis, g) in grid.axes.iter().enumerate() {
        let samples = net.axis_derivatives(axis, eps, g, 0)?.swap_remove(0);
        check_spatial_tail(axis, &samples, g, config.tail_tol)?;
        let spec = axis_transform(&samples, g, xi_count(config, g.len())?, &mut planner);
        warnings.extend(spectral_tail_warning(axis, &spec, config.spectral_tail_tol));
        axes.push(spec);
    }
    Ok(SpectralSamples {
        eps,
        amplitude: net.amplitude(eps),
        axes,
        truncation: grid.truncation(),
        warnings,
    })
}

/// Inverse transform of `spectrum` on the spatial grid it came from.
pub fn inverse<T: Scalar>(spectrum: &SpectralSamples<T>) -> Vec<Complex<T>> {
    let mut planner = FftPlanner::new();
    let mut values = vec![Complex::new(spectrum.amplitude, T::zero())];
    for axis in &spectrum.axes {
        let back = axis_inverse(axis, &mut planner);
        values = values
            .iter()
            .flat_map(|&acc| back.iter().map(move |&v| acc * v))
            .collect();
    }
    values
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundtripError {
    pub absolute: f64,
    pub relative: f64,
}

/// `max |u - F^{-1} F u|` over the spatial grid.
pub fn roundtrip_error<T: Scalar>(
    net: &Net<T>,
    eps: T,
    grid: &SampleGrid<T>,
    config: &FourierConfig,
) -> Result<RoundtripError> {
    let spectrum = transform(net, eps, grid, config)?;
    let back = inverse(&spectrum);
    let original = net.evaluate(eps, grid)?.values;
    let absolute = original
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).norm())
        .fold(T::zero(), T::max);
    let peak = original.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let relative = if peak > T::zero() { absolute / peak } else { absolute };
    Ok(RoundtripError {
        absolute: to_f64(absolute),
        relative: to_f64(relative),
    })
}

/// Relative gap between `h sum |u|^2` and `dxi sum |u_hat|^2`.
pub fn parseval_defect<T: Scalar>(
    net: &Net<T>,
    eps: T,
    grid: &SampleGrid<T>,
    config: &FourierConfig,
) -> Result<f64> {
    let spectrum = transform(net, eps, grid, config)?;
    let amp2 = to_f64(spectrum.amplitude * spectrum.amplitude);
    let mut space = amp2;
    let mut freq = amp2;
    for (axis, (g, s)) in grid.axes.iter().zip(&spectrum.axes).enumerate() {
        let samples = net.axis_derivatives(axis, eps, g, 0)?.swap_remove(0);
        space *= to_f64(g.spacing) * samples.iter().map(|v| to_f64(v.norm_sqr())).sum::<f64>();
        freq *= to_f64(s.spacing) * s.values.iter().map(|v| to_f64(v.norm_sqr())).sum::<f64>();
    }
    if space == 0.0 {
        return Ok(freq);
    }
    Ok((space - freq).abs() / space)
}

/// Per-axis `max_k |xi_k|^l |g_hat(xi_k)|` with argmax, `l <= max_l`.
fn axis_weight_table<T: Scalar>(spec: &AxisSpectrum<T>, max_l: usize) -> Vec<(T, usize)> {
    (0..=max_l)
        .map(|l| {
            let mut best = (T::zero(), 0);
            for (i, (x, v)) in spec.xi.iter().zip(&spec.values).enumerate() {
                let w = x.abs().powi(l as i32) * v.norm();
                if w > best.0 {
                    best = (w, i);
                }
            }
            best
        })
        .collect()
}

/// `max_xi |xi^beta u_hat_eps(xi)|` on the frequency grid.
pub fn fourier_seminorm<T: Scalar>(
    net: &Net<T>,
    eps: T,
    beta: &[usize],
    grid: &SampleGrid<T>,
    config: &FourierConfig,
) -> Result<SeminormValue<T>> {
    if beta.len() != net.dims() {
        return Err(Error::InvalidParameter("multi-index length differs from dimension".into()));
    }
    let spectrum = transform(net, eps, grid, config)?;
    let mut value = spectrum.amplitude.abs();
    let mut argmax = Vec::new();
    for (axis, &b) in spectrum.axes.iter().zip(beta) {
        let (v, i) = axis_weight_table(axis, b)[b];
        value *= v;
        argmax.push(axis.xi[i]);
    }
    Ok(SeminormValue { value, argmax })
}

/// Fourier-weight profile `s_{0,l}(eps_k) = max_{|beta| = l} sup |xi^beta u_hat|`.
pub fn fourier_sweep<T: Scalar>(
    net: &Net<T>,
    eps_grid: &EpsilonGrid<T>,
    max_l: usize,
    policy: &GridPolicy,
    config: &FourierConfig,
) -> Result<SeminormProfile<T>> {
    whole_space(net)?;
    let dims = net.dims();
    let rows: Vec<(Vec<T>, GridMeta)> = eps_grid
        .values()
        .into_par_iter()
        .map(|eps| {
            let grid = net.grid(eps, policy, 0, 0)?;
            let spectrum = transform(net, eps, &grid, config)?;
            let tables: Vec<Vec<(T, usize)>> =
                spectrum.axes.iter().map(|a| axis_weight_table(a, max_l)).collect();
            let amp = spectrum.amplitude.abs();
            let row = (0..=max_l)
                .map(|l| {
                    compositions(l, dims)
                        .iter()
                        .map(|beta| (0..dims).fold(amp, |acc, axis| acc * tables[axis][beta[axis]].0))
                        .fold(T::zero(), T::max)
                })
                .collect();
            let mut meta = GridMeta::of(eps, &grid);
            meta.warnings = spectrum.warnings;
            Ok((row, meta))
        })
        .collect::<Result<_>>()?;
    let (rows, meta): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    SeminormProfile::from_rows(*eps_grid, ScaleKind::FourierWeight, 0, max_l, &rows, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::{Amplitude, BoxDomain, Factor, Family, Interval};

    fn half_gaussian() -> Net<f64> {
        Net::on_real_line(Family::Product {
            amplitude: Amplitude::power(0.0),
            factors: vec![Factor::PolyGauss { degree: 0, rate: 0.5 }],
        })
        .unwrap()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let net = half_gaussian();
        let grid = net.grid(0.5, &GridPolicy::default(), 0, 0).unwrap();
        let s = transform(&net, 0.5, &grid, &FourierConfig::default()).unwrap();
        let err = s.axes[0]
            .xi
            .iter()
            .zip(&s.axes[0].values)
            .map(|(x, v)| (v - Complex::new((-x * x / 2.0).exp(), 0.0)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn roundtrip_and_parseval() {
        let net = Net::on_real_line(Family::DeltaNet { p: 1.0 }).unwrap();
        let grid = net.grid(0.5, &GridPolicy::default(), 0, 0).unwrap();
        let cfg = FourierConfig::default();
        assert!(roundtrip_error(&net, 0.5, &grid, &cfg).unwrap().absolute < 1e-10);
        assert!(parseval_defect(&net, 0.5, &grid, &cfg).unwrap() < 1e-10);
    }

    #[test]
    fn proper_boxes_are_not_applicable() {
        let net = Net::new(
            Family::GaussianPeak { p: 1.0 },
            BoxDomain::new(vec![Interval::positive_half_line()]).unwrap(),
            Default::default(),
        )
        .unwrap();
        let grid = net.grid(0.5, &GridPolicy::default(), 0, 0).unwrap();
        assert!(matches!(
            transform(&net, 0.5, &grid, &FourierConfig::default()),
            Err(Error::NotApplicable(_))
        ));
    }
}
