use rayon::prelude::*;

use super::{compositions, AxisGrid, DerivativeMode, GridPolicy, Net};
use crate::asymptotics::{GridMeta, ScaleKind, SeminormProfile};
use crate::error::{Error, Result};
use crate::nets::EpsilonGrid;
use crate::scalar::{lit, to_f64, Scalar};

/// Per-axis sups `max_x |x^l f^(q)(x)|` with their argmax indices.
#[derive(Clone, Debug)]
pub struct AxisTable<T> {
    max_l: usize,
    entries: Vec<(T, usize)>,
}

impl<T: Scalar> AxisTable<T> {
    /// Builds the table and checks the tail criterion at cut ends.
    pub fn build(
        net: &Net<T>,
        axis: usize,
        eps: T,
        grid: &AxisGrid<T>,
        max_q: usize,
        max_l: usize,
        policy: &GridPolicy,
    ) -> Result<Self> {
        let derivs = net.axis_derivatives(axis, eps, grid, max_q)?;
        let tol = lit::<T>(policy.tail_tol);
        let last = grid.len() - 1;
        let mut entries = Vec::with_capacity((max_q + 1) * (max_l + 1));
        // Numerical derivatives inherit truncation from the order-0 samples;
        // their own values at the cut ends sit at the roundoff floor.
        let checked_orders = if net.mode() == DerivativeMode::Analytic { max_q } else { 0 };
        for (q, d) in derivs.iter().enumerate() {
            for l in 0..=max_l {
                let weighted = |i: usize| grid.nodes[i].abs().powi(l as i32) * d[i].norm();
                let mut best = (T::zero(), 0);
                for i in 0..grid.len() {
                    let v = weighted(i);
                    if v > best.0 {
                        best = (v, i);
                    }
                }
                if q <= checked_orders && best.0 > T::zero() {
                    for (cut, i) in [(grid.cut_lo, 0), (grid.cut_hi, last)] {
                        if cut.is_some() {
                            let ratio = weighted(i) / best.0;
                            if ratio > tol {
                                return Err(Error::TailCriterion {
                                    axis,
                                    ratio: to_f64(ratio),
                                    tolerance: policy.tail_tol,
                                });
                            }
                        }
                    }
                }
                entries.push(best);
            }
        }
        Ok(Self { max_l, entries })
    }

    pub fn get(&self, q: usize, l: usize) -> (T, usize) {
        self.entries[q * (self.max_l + 1) + l]
    }
}

/// Mixed-scale table `s_{q,l}(eps_k)`: the max over `|alpha| = q`,
/// `|beta| = l` of the grid seminorms, for every `eps` in the grid.
pub fn seminorm_sweep<T: Scalar>(
    net: &Net<T>,
    eps_grid: &EpsilonGrid<T>,
    max_q: usize,
    max_l: usize,
    policy: &GridPolicy,
) -> Result<SeminormProfile<T>> {
    let dims = net.dims();
    let rows: Vec<(Vec<T>, GridMeta)> = eps_grid
        .values()
        .into_par_iter()
        .map(|eps| {
            let grid = net.grid(eps, policy, max_q, max_l)?;
            let tables: Vec<AxisTable<T>> = (0..dims)
                .map(|axis| AxisTable::build(net, axis, eps, &grid.axes[axis], max_q, max_l, policy))
                .collect::<Result<_>>()?;
            let amp = net.amplitude(eps);
            let mut row = Vec::with_capacity((max_q + 1) * (max_l + 1));
            for q in 0..=max_q {
                let alphas = compositions(q, dims);
                for l in 0..=max_l {
                    let betas = compositions(l, dims);
                    let mut best = T::zero();
                    for alpha in &alphas {
                        for beta in &betas {
                            let mut v = amp;
                            for axis in 0..dims {
                                v *= tables[axis].get(alpha[axis], beta[axis]).0;
                            }
                            best = best.max(v);
                        }
                    }
                    row.push(best);
                }
            }
            Ok((row, GridMeta::of(eps, &grid)))
        })
        .collect::<Result<_>>()?;
    let (rows, meta): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    SeminormProfile::from_rows(*eps_grid, ScaleKind::Mixed, max_q, max_l, &rows, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nets::Family;

    #[test]
    fn gaussian_row_is_exact() {
        let net = Net::on_real_line(Family::GaussianPeak { p: 1.0 }).unwrap();
        let eps = EpsilonGrid::new(0.5, 0.75, 6).unwrap();
        let prof = seminorm_sweep(&net, &eps, 0, 0, &GridPolicy::default()).unwrap();
        for (k, e) in eps.values().into_iter().enumerate() {
            assert_eq!(prof.series(0, 0).unwrap()[k], 1.0 / e);
        }
    }
}
