//! Tensor grids discretizing the sup over a box.

use serde::{Deserialize, Serialize};

use super::domain::{BoxDomain, Interval};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Rules for building a grid for one net and one `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPolicy {
    /// Intervals per axis; `None` picks 4096, 1024 or 128 for 1, 2 or 3
    /// dimensions.
    #[serde(default)]
    pub nodes_per_dim: Option<usize>,
    /// Fewest nodes inside any compact support.
    #[serde(default = "default_min_support_nodes")]
    pub min_support_nodes: usize,
    /// At an artificial cut, `|x^l d^q u|` must be below `tail_tol` times
    /// its grid maximum.
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_min_support_nodes() -> usize {
    32
}

fn default_tail_tol() -> f64 {
    1e-14
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            nodes_per_dim: None,
            min_support_nodes: default_min_support_nodes(),
            tail_tol: default_tail_tol(),
        }
    }
}

impl GridPolicy {
    pub fn intervals_for(&self, dims: usize) -> usize {
        self.nodes_per_dim.unwrap_or(match dims {
            1 => 4096,
            2 => 1024,
            _ => 128,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_dim.is_some_and(|n| n < 16) {
            return Err(Error::InvalidParameter("nodes_per_dim must be at least 16".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::InvalidParameter("tail_tol must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Uniform nodes along one axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisGrid<T> {
    pub nodes: Vec<T>,
    pub spacing: T,
    /// Where an infinite (or far) domain end was cut off; the tail criterion
    /// is checked at these ends.
    pub cut_lo: Option<T>,
    pub cut_hi: Option<T>,
}

impl<T: Scalar> AxisGrid<T> {
    /// Nodes `anchor + j h` inside `[lo, hi]` and strictly inside `domain`,
    /// with the anchor at 0 when `[lo, hi]` contains it.
    pub fn uniform(lo: T, hi: T, intervals: usize, domain: Interval<T>) -> Result<Self> {
        if !(lo < hi) || intervals == 0 {
            return Err(Error::InvalidParameter(format!("empty grid extent [{lo}, {hi}]")));
        }
        let h = (hi - lo) / from_usize(intervals);
        let anchor = if lo <= T::zero() && T::zero() <= hi { T::zero() } else { lo };
        let first = ((lo - anchor) / h).round().to_i64().unwrap();
        let last = ((hi - anchor) / h).round().to_i64().unwrap();
        let nodes: Vec<T> = (first..=last)
            .map(|j| anchor + lit::<T>(j as f64) * h)
            .filter(|&x| x >= lo && x <= hi && domain.contains(x))
            .collect();
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid extent [{lo}, {hi}] leaves fewer than two nodes inside the domain"
            )));
        }
        Ok(Self {
            nodes,
            spacing: h,
            cut_lo: None,
            cut_hi: None,
        })
    }

    /// Explicit nodes; they must be uniformly spaced.
    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("an axis grid needs at least two nodes".into()));
        }
        let h = nodes[1] - nodes[0];
        let uniform = nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= lit::<T>(1e-9) * h.abs());
        if !(h > T::zero()) || !uniform {
            return Err(Error::InvalidParameter("grid nodes must be increasing and uniform".into()));
        }
        Ok(Self {
            nodes,
            spacing: h,
            cut_lo: None,
            cut_hi: None,
        })
    }

    /// Inserts every midpoint; old nodes are kept bit for bit.
    pub fn refined(&self) -> Self {
        let half = self.spacing / lit(2.0);
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(w[0] + half);
        }
        nodes.push(*self.nodes.last().unwrap());
        Self {
            nodes,
            spacing: half,
            cut_lo: self.cut_lo,
            cut_hi: self.cut_hi,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleGrid<T> {
    pub axes: Vec<AxisGrid<T>>,
}

impl<T: Scalar> SampleGrid<T> {
    pub fn new(axes: Vec<AxisGrid<T>>) -> Self {
        Self { axes }
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(AxisGrid::len).product()
    }

    pub fn refined(&self) -> Self {
        Self {
            axes: self.axes.iter().map(AxisGrid::refined).collect(),
        }
    }

    /// Cut radius per axis, `(lo, hi)`, for reports.
    pub fn truncation(&self) -> Vec<(Option<f64>, Option<f64>)> {
        self.axes
            .iter()
            .map(|a| (a.cut_lo.map(to_f64), a.cut_hi.map(to_f64)))
            .collect()
    }

    pub fn check_within(&self, domain: &BoxDomain<T>) -> Result<()> {
        if self.dims() != domain.dims() {
            return Err(Error::GridDimension {
                grid: self.dims(),
                net: domain.dims(),
            });
        }
        for (axis, (a, i)) in self.axes.iter().zip(domain.intervals()).enumerate() {
            if let Some(&x) = a.nodes.iter().find(|&&x| !i.contains(x)) {
                return Err(Error::GridOutsideDomain {
                    axis,
                    node: to_f64(x),
                });
            }
        }
        Ok(())
    }

    /// Index of node `flat` in each axis, last axis fastest.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims()];
        for (axis, a) in self.axes.iter().enumerate().rev() {
            idx[axis] = flat % a.len();
            flat /= a.len();
        }
        idx
    }

    pub fn point(&self, idx: &[usize]) -> Vec<T> {
        self.axes.iter().zip(idx).map(|(a, &i)| a.nodes[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_contains_zero_and_mirrors() {
        let g = AxisGrid::uniform(-2.0, 2.0, 64, Interval::real_line()).unwrap();
        assert_eq!(g.len(), 65);
        assert!(g.nodes.contains(&0.0));
        for (a, b) in g.nodes.iter().zip(g.nodes.iter().rev()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn open_ends_are_excluded() {
        let g = AxisGrid::uniform(0.0, 1.0, 10, Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g.nodes[0] > 0.0 && *g.nodes.last().unwrap() < 1.0);
    }

    #[test]
    fn refinement_is_nested() {
        let g = AxisGrid::uniform(-1.0, 3.0, 40, Interval::real_line()).unwrap();
        let r = g.refined();
        assert_eq!(r.len(), 2 * g.len() - 1);
        for (i, x) in g.nodes.iter().enumerate() {
            assert_eq!(r.nodes[2 * i], *x);
        }
    }

    #[test]
    fn explicit_nodes_checked() {
        assert!(AxisGrid::from_nodes(vec![0.0, 1.0, 3.0]).is_err());
        let grid = SampleGrid::new(vec![AxisGrid::from_nodes(vec![-1.0, 0.0, 1.0]).unwrap()]);
        let half = BoxDomain::new(vec![Interval::positive_half_line()]).unwrap();
        assert!(matches!(grid.check_within(&half), Err(Error::GridOutsideDomain { .. })));
    }
}
