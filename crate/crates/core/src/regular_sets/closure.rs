//! Closure operations on finite windows and the budgeted closure search used
//! for custom sets.

use std::collections::HashSet;

use super::{DoubleSeqWindow, SeqWindow, Window};
use crate::scalar::{to_f64, Scalar};

/// Rectangular block of values; single windows have one column.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Block<T> {
    pub rows: usize,
    pub cols: usize,
    pub single: bool,
    pub values: Vec<T>,
}

impl<T: Scalar> Block<T> {
    pub fn from_window(w: &Window<T>) -> Self {
        let (rows, cols) = w.shape();
        Self {
            rows,
            cols,
            single: matches!(w, Window::Single(_)),
            values: w.values().to_vec(),
        }
    }

    pub fn constant(rows: usize, cols: usize, single: bool, c: T) -> Self {
        Self {
            rows,
            cols,
            single,
            values: vec![c; rows * cols],
        }
    }

    pub fn to_window(&self) -> Window<T> {
        if self.single {
            Window::Single(SeqWindow {
                values: self.values.clone(),
            })
        } else {
            Window::Double(DoubleSeqWindow {
                max_q: self.rows - 1,
                max_l: self.cols - 1,
                values: self.values.clone(),
            })
        }
    }

    #[inline]
    pub fn at(&self, q: usize, l: usize) -> T {
        self.values[q * self.cols + l]
    }

    fn build(rows: usize, cols: usize, single: bool, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for q in 0..rows {
            for l in 0..cols {
                values.push(f(q, l));
            }
        }
        Self {
            rows,
            cols,
            single,
            values,
        }
    }

    /// `(q, l) -> N_{q+kq, l+kl} + c`, defined where the shifted index is
    /// still inside the window.
    pub fn shift(&self, kq: usize, kl: usize, c: T) -> Option<Self> {
        if kq >= self.rows || kl >= self.cols {
            return None;
        }
        Some(Self::build(self.rows - kq, self.cols - kl, self.single, |q, l| {
            self.at(q + kq, l + kl) + c
        }))
    }

    pub fn truncate(&self, rows: usize, cols: usize) -> Self {
        Self::build(rows.min(self.rows), cols.min(self.cols), self.single, |q, l| self.at(q, l))
    }

    pub fn max(&self, other: &Self) -> Self {
        let rows = self.rows.min(other.rows);
        let cols = self.cols.min(other.cols);
        Self::build(rows, cols, self.single, |q, l| self.at(q, l).max(other.at(q, l)))
    }

    /// Max-plus convolution `max_{q1+q2=q, l1+l2=l} N_{q1,l1} + N'_{q2,l2}`,
    /// the least sequence satisfying the index-additive axiom.
    pub fn maxplus(&self, other: &Self) -> Self {
        let rows = self.rows.min(other.rows);
        let cols = self.cols.min(other.cols);
        Self::build(rows, cols, self.single, |q, l| {
            let mut best = T::neg_infinity();
            for q1 in 0..=q {
                for l1 in 0..=l {
                    best = best.max(self.at(q1, l1) + other.at(q - q1, l - l1));
                }
            }
            best
        })
    }

    /// Minimum of `self - target` over the target's index set, or `None` when
    /// `self` does not cover that index set.
    pub fn slack_over(&self, target: &Self) -> Option<T> {
        if self.rows < target.rows || self.cols < target.cols {
            return None;
        }
        let mut slack = T::infinity();
        for q in 0..target.rows {
            for l in 0..target.cols {
                slack = slack.min(self.at(q, l) - target.at(q, l));
            }
        }
        Some(slack)
    }

    pub fn covers(&self, target: &Self) -> bool {
        self.slack_over(target).is_some_and(|s| s >= T::zero())
    }

    fn key(&self) -> (usize, usize, Vec<u64>) {
        (
            self.rows,
            self.cols,
            self.values.iter().map(|&v| to_f64(v).to_bits()).collect(),
        )
    }
}

/// Elements reachable from the generators in at most `depth` rounds, one
/// round applying every permitted operation to the elements already found.
#[derive(Debug)]
pub(crate) struct ClosureLevels<T> {
    /// `levels[d]` holds the elements first produced in round `d`.
    pub levels: Vec<Vec<Block<T>>>,
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ClosureOps {
    /// Include shift-plus-constant variants in each round.
    pub shifts: bool,
    pub max_elements: usize,
}

/// Shifts and constants explored when the closure includes R1.
pub(crate) const SHIFT_RANGE: usize = 2;
pub(crate) const CONSTANT_RANGE: usize = 3;

impl<T: Scalar> ClosureLevels<T> {
    pub fn build(generators: &[Block<T>], depth: usize, ops: ClosureOps) -> Self {
        let mut seen = HashSet::new();
        let mut all: Vec<Block<T>> = Vec::new();
        let mut first = Vec::new();
        for g in generators {
            if seen.insert(g.key()) {
                first.push(g.clone());
                all.push(g.clone());
            }
        }
        let mut levels = vec![first];
        let mut truncated = false;
        'rounds: for _ in 0..depth {
            let mut fresh = Vec::new();
            let snapshot = all.clone();
            let mut push = |b: Block<T>, fresh: &mut Vec<Block<T>>, all: &mut Vec<Block<T>>| -> bool {
                if all.len() >= ops.max_elements {
                    return false;
                }
                if seen.insert(b.key()) {
                    fresh.push(b.clone());
                    all.push(b);
                }
                true
            };
            for (i, a) in snapshot.iter().enumerate() {
                for b in &snapshot[i..] {
                    if !push(a.max(b), &mut fresh, &mut all) || !push(a.maxplus(b), &mut fresh, &mut all) {
                        truncated = true;
                        levels.push(fresh);
                        break 'rounds;
                    }
                }
                if ops.shifts {
                    for block in shift_variants(a) {
                        if !push(block, &mut fresh, &mut all) {
                            truncated = true;
                            levels.push(fresh);
                            break 'rounds;
                        }
                    }
                }
            }
            let done = fresh.is_empty();
            levels.push(fresh);
            if done {
                break;
            }
        }
        Self { levels, truncated }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Block<T>)> {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(d, level)| level.iter().map(move |b| (d, b)))
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

pub(crate) fn shift_variants<T: Scalar>(a: &Block<T>) -> Vec<Block<T>> {
    let col_shifts = if a.single { 0 } else { SHIFT_RANGE };
    let mut out = Vec::new();
    for kq in 0..=SHIFT_RANGE {
        for kl in 0..=col_shifts {
            for c in 0..=CONSTANT_RANGE {
                if kq == 0 && kl == 0 && c == 0 {
                    continue;
                }
                if let Some(b) = a.shift(kq, kl, T::from(c).unwrap()) {
                    out.push(b);
                }
            }
        }
    }
    out
}
