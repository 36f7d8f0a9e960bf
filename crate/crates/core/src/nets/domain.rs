use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Open interval `(lo, hi)` with possibly infinite ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval ({lo}, {hi}) is empty"
            )));
        }
        if lo == T::infinity() || hi == T::neg_infinity() {
            return Err(Error::InvalidParameter(format!(
                "interval ({lo}, {hi}) has no finite points"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn positive_half_line() -> Self {
        Self {
            lo: T::zero(),
            hi: T::infinity(),
        }
    }

    pub fn is_real_line(&self) -> bool {
        self.lo.is_infinite() && self.hi.is_infinite()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn straddles_zero(&self) -> bool {
        self.lo < T::zero() && T::zero() < self.hi
    }

    pub fn mirrored(&self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// Box `I_1 x ... x I_n`, `1 <= n <= 3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain<T> {
    intervals: Vec<Interval<T>>,
}

pub const MAX_DIMS: usize = 3;

impl<T: Scalar> BoxDomain<T> {
    pub fn new(intervals: Vec<Interval<T>>) -> Result<Self> {
        if intervals.is_empty() || intervals.len() > MAX_DIMS {
            return Err(Error::InvalidParameter(format!(
                "boxes have 1 to {MAX_DIMS} dimensions, got {}",
                intervals.len()
            )));
        }
        for i in &intervals {
            Interval::new(i.lo, i.hi)?;
        }
        Ok(Self { intervals })
    }

    pub fn whole_space(dims: usize) -> Result<Self> {
        Self::new(vec![Interval::real_line(); dims])
    }

    pub fn dims(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval<T>] {
        &self.intervals
    }

    pub fn interval(&self, axis: usize) -> Interval<T> {
        self.intervals[axis]
    }

    pub fn is_whole_space(&self) -> bool {
        self.intervals.iter().all(Interval::is_real_line)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dims() && self.intervals.iter().zip(x).all(|(i, &v)| i.contains(v))
    }

    /// The box with axis 0 mirrored through the origin.
    pub fn mirrored_first_axis(&self) -> Self {
        let mut intervals = self.intervals.clone();
        intervals[0] = intervals[0].mirrored();
        Self { intervals }
    }

    /// The two halves `x_1 < 0` and `x_1 > 0` when axis 0 straddles zero.
    pub fn split_first_axis(&self) -> Option<(Self, Self)> {
        let first = self.intervals[0];
        if !first.straddles_zero() {
            return None;
        }
        let mut neg = self.intervals.clone();
        let mut pos = self.intervals.clone();
        neg[0] = Interval {
            lo: first.lo,
            hi: T::zero(),
        };
        pos[0] = Interval {
            lo: T::zero(),
            hi: first.hi,
        };
        Some((Self { intervals: neg }, Self { intervals: pos }))
    }
}

/// Geometric grid `eps_k = eps0 * ratio^k`, `k = 0..count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid<T> {
    eps0: T,
    ratio: T,
    count: usize,
}

impl<T: Scalar> EpsilonGrid<T> {
    pub const MIN_COUNT: usize = 4;

    pub fn new(eps0: T, ratio: T, count: usize) -> Result<Self> {
        if !(eps0 > T::zero() && eps0 <= T::one()) {
            return Err(Error::InvalidParameter(format!("eps0 = {eps0} must lie in (0, 1]")));
        }
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(Error::InvalidParameter(format!("ratio = {ratio} must lie in (0, 1)")));
        }
        if count < Self::MIN_COUNT {
            return Err(Error::InvalidParameter(format!(
                "count = {count} must be at least {}",
                Self::MIN_COUNT
            )));
        }
        let last = eps0 * ratio.powi(count as i32 - 1);
        if !(last > T::min_positive_value()) {
            return Err(Error::InvalidParameter(format!(
                "eps grid underflows: eps_{} = {last}",
                count - 1
            )));
        }
        Ok(Self { eps0, ratio, count })
    }

    pub fn eps0(&self) -> T {
        self.eps0
    }

    pub fn ratio(&self) -> T {
        self.ratio
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn value(&self, k: usize) -> T {
        self.eps0 * self.ratio.powi(k as i32)
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|k| self.value(k)).collect()
    }

    pub fn smallest(&self) -> T {
        self.value(self.count - 1)
    }

    /// Same span, `ratio` replaced by `ratio^2`.
    pub fn coarsened(&self) -> Result<Self> {
        let count = (self.count - 1) / 2 + 1;
        Self::new(self.eps0, self.ratio * self.ratio, count.max(Self::MIN_COUNT))
    }
}

impl<T: Scalar> Default for EpsilonGrid<T> {
    fn default() -> Self {
        Self {
            eps0: T::from(0.5).unwrap(),
            ratio: T::from(0.75).unwrap(),
            count: 16,
        }
    }
}

/// Rejects `eps` outside `(0, 1]`.
pub fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if eps > T::zero() && eps <= T::one() {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(crate::scalar::to_f64(eps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_validate() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
        assert!(BoxDomain::<f64>::whole_space(4).is_err());
    }

    #[test]
    fn eps_grid_values() {
        let g = EpsilonGrid::<f64>::new(0.5, 0.75, 16).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 16);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        assert!(EpsilonGrid::new(0.5, 0.75, 3).is_err());
        assert!(EpsilonGrid::new(1.5, 0.75, 5).is_err());
        assert!(EpsilonGrid::new(0.5, 1.0, 5).is_err());
        let c = g.coarsened().unwrap();
        assert!((c.smallest() - g.value(14)).abs() < 1e-15);
    }

    #[test]
    fn split_and_mirror() {
        let b = BoxDomain::new(vec![Interval::new(-1.0, 3.0).unwrap()]).unwrap();
        let (n, p) = b.split_first_axis().unwrap();
        assert_eq!(n.interval(0).hi, 0.0);
        assert_eq!(p.interval(0).lo, 0.0);
        assert_eq!(b.mirrored_first_axis().interval(0), Interval { lo: -3.0, hi: 1.0 });
        let half = BoxDomain::new(vec![Interval::<f64>::positive_half_line()]).unwrap();
        assert!(half.split_first_axis().is_none());
    }
}
