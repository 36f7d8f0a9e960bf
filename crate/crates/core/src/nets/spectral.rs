//! Fourier differentiation of samples on a periodized uniform grid.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// End samples must be this small relative to the peak for the periodic
/// extension to be smooth.
pub const BOUNDARY_TOL: f64 = 1e-10;

pub fn differentiate<T: Scalar>(values: &[Complex<T>], spacing: T, order: usize) -> Result<Vec<Complex<T>>> {
    let n = values.len();
    let peak = values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    if peak > T::zero() {
        let edge = values[0].norm().max(values[n - 1].norm()) / peak;
        if edge > lit(BOUNDARY_TOL) {
            return Err(Error::BoundaryNotSmall(to_f64(edge)));
        }
    }
    if order == 0 {
        return Ok(values.to_vec());
    }
    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    forward.process(&mut buf);
    let base = lit::<T>(2.0) * T::PI() / (from_usize::<T>(n) * spacing);
    for (j, v) in buf.iter_mut().enumerate() {
        if n.is_multiple_of(2) && j == n / 2 && order % 2 == 1 {
            *v = Complex::new(T::zero(), T::zero());
            continue;
        }
        let signed = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let ik = Complex::new(T::zero(), base * lit(signed));
        *v *= ik.powi(order as i32);
    }
    inverse.process(&mut buf);
    let norm = from_usize::<T>(n).recip();
    Ok(buf.into_iter().map(|v| v * norm).collect())
}
