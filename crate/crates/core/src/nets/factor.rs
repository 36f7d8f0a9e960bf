//! One-dimensional factors of separable nets, with closed-form derivatives.

use num_traits::Zero;
use rustfft::num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::scalar::{from_usize, lit, Scalar};

/// Highest derivative order with a precomputed closed form.
pub const ANALYTIC_ORDER_CAP: usize = 10;

/// A one-dimensional building block `f(x; eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor<T> {
    /// `x^degree * exp(-rate * x^2)`; `rate = 0` needs a bounded interval.
    PolyGauss { degree: u32, rate: T },
    /// `phi(x) = exp(-1 / (1 - x^2))` on `(-1, 1)`, zero outside.
    Bump,
    /// `phi(x / eps)`.
    ScaledBump,
    /// `exp(i x / eps) * phi(x)`.
    ModulatedBump,
}

impl<T: Scalar> Factor<T> {
    pub fn gaussian() -> Self {
        Factor::PolyGauss {
            degree: 0,
            rate: T::one(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Factor::ModulatedBump)
    }

    pub fn is_even(&self) -> bool {
        match self {
            Factor::PolyGauss { degree, .. } => degree % 2 == 0,
            Factor::Bump | Factor::ScaledBump => true,
            Factor::ModulatedBump => false,
        }
    }

    /// Closed support, if compact.
    pub fn support(&self, eps: T) -> Option<(T, T)> {
        match self {
            Factor::PolyGauss { .. } => None,
            Factor::Bump | Factor::ModulatedBump => Some((-T::one(), T::one())),
            Factor::ScaledBump => Some((-eps, eps)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Factor::PolyGauss { degree: 0, rate } => format!("exp(-{rate}x^2)"),
            Factor::PolyGauss { degree, rate } => format!("x^{degree}exp(-{rate}x^2)"),
            Factor::Bump => "phi(x)".into(),
            Factor::ScaledBump => "phi(x/eps)".into(),
            Factor::ModulatedBump => "exp(ix/eps)phi(x)".into(),
        }
    }
}

/// Precomputed derivative polynomials of a factor.
#[derive(Clone, Debug)]
pub(crate) struct FactorKernel<T> {
    pub factor: Factor<T>,
    polys: Vec<Poly<T>>,
}

impl<T: Scalar> FactorKernel<T> {
    pub fn new(factor: Factor<T>) -> Self {
        let mut polys = Vec::with_capacity(ANALYTIC_ORDER_CAP + 1);
        match factor {
            Factor::PolyGauss { degree, rate } => {
                // (P e^{-a x^2})' = (P' - 2 a x P) e^{-a x^2}
                let step = Poly {
                    coeffs: vec![T::zero(), -lit::<T>(2.0) * rate],
                };
                let mut p = Poly::monomial(degree as usize);
                for _ in 0..=ANALYTIC_ORDER_CAP {
                    let next = p.derivative().add(&step.mul(&p));
                    polys.push(p);
                    p = next;
                }
            }
            Factor::Bump | Factor::ScaledBump | Factor::ModulatedBump => {
                // phi^(k) = phi P_k / t^{2k}, t = 1 - x^2, and
                // P_{k+1} = -2x P_k + t^2 P_k' + 4k x t P_k.
                let t = Poly::from_coeffs(&[1.0, 0.0, -1.0]);
                let t2 = t.mul(&t);
                let minus_2x = Poly::from_coeffs(&[0.0, -2.0]);
                let mut p = Poly::monomial(0);
                for k in 0..=ANALYTIC_ORDER_CAP {
                    let four_k_x_t = Poly {
                        coeffs: vec![T::zero(), lit::<T>(4.0) * from_usize::<T>(k)],
                    }
                    .mul(&t);
                    let next = minus_2x
                        .mul(&p)
                        .add(&t2.mul(&p.derivative()))
                        .add(&four_k_x_t.mul(&p));
                    polys.push(p);
                    p = next;
                }
            }
        }
        Self { factor, polys }
    }

    /// `phi^(k)(y)`.
    fn bump(&self, k: usize, y: T) -> T {
        let t = T::one() - y * y;
        if t <= T::zero() {
            return T::zero();
        }
        let log_mag = -t.recip() - from_usize::<T>(2 * k) * t.ln();
        let e = log_mag.exp();
        if e == T::zero() {
            return T::zero();
        }
        e * self.polys[k].eval(y)
    }

    /// `f^(k)(x; eps)` for `k <= ANALYTIC_ORDER_CAP`.
    pub fn derivative(&self, k: usize, x: T, eps: T) -> Complex<T> {
        match self.factor {
            Factor::PolyGauss { rate, .. } => {
                Complex::new(self.polys[k].eval(x) * (-rate * x * x).exp(), T::zero())
            }
            Factor::Bump => Complex::new(self.bump(k, x), T::zero()),
            Factor::ScaledBump => {
                Complex::new(self.bump(k, x / eps) / eps.powi(k as i32), T::zero())
            }
            Factor::ModulatedBump => {
                let (s, c) = (x / eps).sin_cos();
                let phase = Complex::new(c, s);
                let freq = Complex::new(T::zero(), eps.recip());
                let mut sum: Complex<T> = Complex::zero();
                let mut binom = T::one();
                let mut power: Complex<T> = Complex::new(T::one(), T::zero());
                for j in 0..=k {
                    sum += power * (binom * self.bump(k - j, x));
                    binom = binom * from_usize::<T>(k - j) / from_usize::<T>(j + 1);
                    power *= freq;
                }
                sum * phase
            }
        }
    }

    /// `f(x + h) - f(x)` without cancellation for small `h`.
    pub fn increment(&self, x: T, h: T, eps: T) -> Complex<T> {
        match self.factor {
            Factor::PolyGauss { degree, rate } => {
                let d = degree as usize;
                let g = (-rate * x * x).exp();
                let dg = g * (-rate * (lit::<T>(2.0) * x * h + h * h)).exp_m1();
                let g_next = g + dg;
                let p = x.powi(d as i32);
                let mut dp = T::zero();
                let mut binom = T::one();
                for j in 1..=d {
                    binom = binom * from_usize::<T>(d + 1 - j) / from_usize::<T>(j);
                    dp += binom * x.powi((d - j) as i32) * h.powi(j as i32);
                }
                Complex::new(dp * g_next + p * dg, T::zero())
            }
            Factor::Bump => Complex::new(bump_increment(x, h), T::zero()),
            Factor::ScaledBump => Complex::new(bump_increment(x / eps, h / eps), T::zero()),
            Factor::ModulatedBump => {
                let (s, c) = (x / eps).sin_cos();
                let phase = Complex::new(c, s);
                let delta = h / eps;
                let half = (delta / lit(2.0)).sin();
                let step_minus_one = Complex::new(-lit::<T>(2.0) * half * half, delta.sin());
                let phase_next = phase + phase * step_minus_one;
                phase_next * bump_increment(x, h) + phase * step_minus_one * bump_value(x)
            }
        }
    }

    /// Radius beyond which every `|x^l f^(q)(x)|`, `q <= max_q`, `l <= max_l`
    /// stays below `rel_tol` times its peak. `None` for compact or
    /// non-decaying factors.
    pub fn decay_radius(&self, max_q: usize, max_l: usize, rel_tol: T) -> Option<T> {
        let Factor::PolyGauss { rate, .. } = self.factor else {
            return None;
        };
        if rate <= T::zero() {
            return None;
        }
        let inv_sqrt = rate.sqrt().recip();
        let mut radius = T::one();
        for q in 0..=max_q.min(ANALYTIC_ORDER_CAP) {
            let poly = &self.polys[q];
            let deg = poly.degree();
            let sum = poly.abs_sum();
            for l in 0..=max_l {
                let power = from_usize::<T>(l + deg);
                let monotone_from = (power / (lit::<T>(2.0) * rate)).sqrt().max(T::one());
                let scan_to = monotone_from + lit::<T>(4.0) * inv_sqrt;
                let peak = (0..=4000)
                    .map(|i| scan_to * from_usize::<T>(i) / lit(4000.0))
                    .map(|x| (x.powi(l as i32) * poly.eval(x) * (-rate * x * x).exp()).abs())
                    .fold(T::zero(), T::max);
                if peak == T::zero() {
                    continue;
                }
                let threshold = rel_tol * peak;
                let mut r = monotone_from;
                let step = lit::<T>(0.05) * inv_sqrt;
                while sum * r.powf(power) * (-rate * r * r).exp() > threshold {
                    r += step;
                }
                radius = radius.max(r);
            }
        }
        Some(radius)
    }
}

fn bump_value<T: Scalar>(y: T) -> T {
    let t = T::one() - y * y;
    if t <= T::zero() {
        T::zero()
    } else {
        (-t.recip()).exp()
    }
}

/// `phi(y + dy) - phi(y)`.
fn bump_increment<T: Scalar>(y: T, dy: T) -> T {
    let t = T::one() - y * y;
    let y_next = y + dy;
    let t_next = T::one() - y_next * y_next;
    if t <= T::zero() {
        return bump_value(y_next);
    }
    if t_next <= T::zero() {
        return -bump_value(y);
    }
    // 1/t - 1/t' = (t' - t) / (t t'),  t' - t = -(2 y dy + dy^2)
    let dt = -(lit::<T>(2.0) * y * dy + dy * dy);
    bump_value(y) * (dt / (t * t_next)).exp_m1()
}

/// Amplitude `eps^{-power} * exp(-1/eps)^[exp_small]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitude<T> {
    pub power: T,
    #[serde(default)]
    pub exp_small: bool,
}

impl<T: Scalar> Amplitude<T> {
    pub fn power(p: T) -> Self {
        Self {
            power: p,
            exp_small: false,
        }
    }

    pub fn exp_small() -> Self {
        Self {
            power: T::zero(),
            exp_small: true,
        }
    }

    pub fn value(&self, eps: T) -> T {
        let base = eps.powf(-self.power);
        if self.exp_small {
            base * (-eps.recip()).exp()
        } else {
            base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn bump_values() {
        let k = FactorKernel::<f64>::new(Factor::Bump);
        assert!((k.derivative(0, 0.0, 1.0).re - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(k.derivative(3, 1.0, 1.0).re, 0.0);
        assert_eq!(k.derivative(0, 1.5, 1.0).re, 0.0);
        for order in 0..6 {
            for &x in &[-0.7, -0.2, 0.1, 0.55, 0.9] {
                let num = fd(|y| k.derivative(order, y, 1.0).re, x, 1e-4);
                let exact = k.derivative(order + 1, x, 1.0).re;
                assert!((num - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "k={order} x={x}");
            }
        }
    }

    #[test]
    fn gaussian_derivatives() {
        let k = FactorKernel::<f64>::new(Factor::gaussian());
        assert_eq!(k.derivative(2, 0.0, 1.0).re, -2.0);
        assert_eq!(k.derivative(1, 0.0, 1.0).re, 0.0);
        let x: f64 = 0.8;
        let exact4 = (16.0 * x.powi(4) - 48.0 * x * x + 12.0) * (-x * x).exp();
        assert!((k.derivative(4, x, 1.0).re - exact4).abs() < 1e-13);
    }

    #[test]
    fn modulated_matches_leibniz_by_fd() {
        let k = FactorKernel::<f64>::new(Factor::ModulatedBump);
        let eps = 0.3;
        for order in 0..4 {
            let x = 0.37;
            let re = fd(|y| k.derivative(order, y, eps).re, x, 1e-4);
            let im = fd(|y| k.derivative(order, y, eps).im, x, 1e-4);
            let exact = k.derivative(order + 1, x, eps);
            assert!((re - exact.re).abs() < 1e-5 * (1.0 + exact.norm()));
            assert!((im - exact.im).abs() < 1e-5 * (1.0 + exact.norm()));
        }
    }

    #[test]
    fn increments_match_differences() {
        for factor in [
            Factor::PolyGauss { degree: 3, rate: 1.0 },
            Factor::Bump,
            Factor::ScaledBump,
            Factor::ModulatedBump,
        ] {
            let k = FactorKernel::<f64>::new(factor);
            for &x in &[-0.8, -0.1, 0.0, 0.2, 0.45] {
                let eps = 0.5;
                let h = 1e-3;
                let direct = k.derivative(0, x + h, eps) - k.derivative(0, x, eps);
                let inc = k.increment(x, h, eps);
                assert!((direct - inc).norm() < 1e-14, "{factor:?} x={x}");
            }
        }
    }

    #[test]
    fn decay_radius_controls_tail() {
        let k = FactorKernel::<f64>::new(Factor::gaussian());
        let r = k.decay_radius(4, 4, 1e-16).unwrap();
        assert!(r > 5.0 && r < 10.0);
        let tail = r.powi(4) * k.derivative(4, r, 1.0).re.abs();
        assert!(tail < 1e-16 * 12.0);
        assert!(FactorKernel::<f64>::new(Factor::Bump).decay_radius(4, 4, 1e-16).is_none());
    }

    #[test]
    fn amplitudes() {
        assert_eq!(Amplitude::power(1.0).value(0.5), 2.0);
        assert!((Amplitude::<f64>::exp_small().value(0.1) - (-10.0f64).exp()).abs() < 1e-20);
    }
}
