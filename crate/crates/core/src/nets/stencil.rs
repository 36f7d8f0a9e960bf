//! Finite-difference weights by Fornberg's recursion and stencil application
//! on uniform grids.

use num_traits::Zero;
use rustfft::num_complex::Complex;

use crate::scalar::{from_usize, Scalar};

/// Weights `w[k][j]` such that `f^(k)(z) ~ sum_j w[k][j] f(nodes[j])` for
/// `k = 0..=max_order`.
pub fn fornberg_weights<T: Scalar>(z: T, nodes: &[T], max_order: usize) -> Vec<Vec<T>> {
    let n = nodes.len();
    let mut c = vec![vec![T::zero(); n]; max_order + 1];
    c[0][0] = T::one();
    let mut c1 = T::one();
    let mut c4 = nodes[0] - z;
    for i in 1..n {
        let mi = i.min(max_order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mi).rev() {
                    c[k][i] = c1 * (from_usize::<T>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mi).rev() {
                c[k][j] = (c4 * c[k][j] - from_usize::<T>(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Order-`order` derivative of uniformly spaced samples: centered stencils
/// of accuracy >= 4 in the interior, one-sided `order + 4` point stencils
/// near the ends.
pub fn differentiate<T: Scalar>(values: &[Complex<T>], spacing: T, order: usize) -> Vec<Complex<T>> {
    let n = values.len();
    if order == 0 {
        return values.to_vec();
    }
    let half = order.div_ceil(2) + 1;
    let width = 2 * half + 1;
    let one_sided = order + 4;
    if n < one_sided.max(width) {
        return vec![Complex::zero(); n];
    }
    let scale = spacing.powi(order as i32).recip();
    let offsets: Vec<T> = (0..width).map(|j| from_usize::<T>(j) - from_usize::<T>(half)).collect();
    let centered = fornberg_weights(T::zero(), &offsets, order).swap_remove(order);
    let side_nodes: Vec<T> = (0..one_sided).map(from_usize::<T>).collect();
    let mut out = vec![Complex::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let acc = if i >= half && i + half < n {
            apply(&values[i - half..=i + half], &centered)
        } else if i < half {
            let w = fornberg_weights(from_usize(i), &side_nodes, order).swap_remove(order);
            apply(&values[..one_sided], &w)
        } else {
            let start = n - one_sided;
            let w = fornberg_weights(from_usize(i - start), &side_nodes, order).swap_remove(order);
            apply(&values[start..], &w)
        };
        *slot = acc * scale;
    }
    out
}

fn apply<T: Scalar>(values: &[Complex<T>], weights: &[T]) -> Complex<T> {
    values
        .iter()
        .zip(weights)
        .fold(Complex::zero(), |acc, (v, &w)| acc + v * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_weights() {
        let w = fornberg_weights::<f64>(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - d1[j]).abs() < 1e-14);
            assert!((w[2][j] - d2[j]).abs() < 1e-14);
        }
        assert!((w[0][2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polynomials_are_differentiated_exactly() {
        let h = 0.1;
        let xs: Vec<f64> = (0..30).map(|i| i as f64 * h).collect();
        let v: Vec<Complex<f64>> = xs.iter().map(|&x| Complex::new(x.powi(3) - 2.0 * x, 0.0)).collect();
        let d1 = differentiate(&v, h, 1);
        let d3 = differentiate(&v, h, 3);
        for (i, &x) in xs.iter().enumerate() {
            assert!((d1[i].re - (3.0 * x * x - 2.0)).abs() < 1e-9, "i={i}");
            assert!((d3[i].re - 6.0).abs() < 1e-6, "i={i}");
        }
    }
}
