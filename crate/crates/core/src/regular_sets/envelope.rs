//! Domination of finite windows and minimal dominating envelopes.

use serde::Serialize;

use super::closure::Block;
use super::{RegularSetSpec, SeqWindow, SetKind, Window, MIN_AFFINE_INTERCEPT};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

/// Parameters of the set element that dominates a window.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Witness<T> {
    Constant { c: T },
    Affine { a: T, b: T },
    /// A closure element of a custom set; `depth` is the number of
    /// convolution rounds needed to reach it.
    Element { window: Window<T>, depth: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationResult<T> {
    pub feasible: bool,
    pub witness: Option<Witness<T>>,
    /// Minimum of `witness - window` over the window; negative when
    /// infeasible.
    pub margin: T,
    /// `(rows, cols)` of the window the verdict refers to.
    pub window_shape: (usize, usize),
}

/// Decides whether `window` lies below some element of the set described by
/// `spec`.
pub fn dominates<T: Scalar>(
    spec: &RegularSetSpec<T>,
    window: &Window<T>,
) -> Result<DominationResult<T>> {
    if window.arity() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity().name(),
            found: window.arity().name(),
        });
    }
    let window_shape = window.shape();
    match spec.kind() {
        SetKind::All => Ok(DominationResult {
            feasible: true,
            witness: None,
            margin: T::zero(),
            window_shape,
        }),
        SetKind::Bounded => Ok(DominationResult {
            feasible: true,
            witness: Some(Witness::Constant {
                c: window.max_value(),
            }),
            margin: T::zero(),
            window_shape,
        }),
        SetKind::Affine => {
            let Window::Single(w) = window else {
                unreachable!("arity checked above")
            };
            let (a, b) = affine_envelope(w);
            Ok(DominationResult {
                feasible: true,
                witness: Some(Witness::Affine { a, b }),
                margin: affine_margin(w, a, b),
                window_shape,
            })
        }
        SetKind::Custom { generators } => dominate_custom(generators, spec.closure_depth(), window),
    }
}

/// The dominating line `a m + b` of least intercept, and among those the
/// least slope: `b = N_0` (raised to a tiny positive floor) and
/// `a = max(0, max_m (N_m - N_0) / m)`.
///
/// Every other dominating line has a larger intercept or a larger slope, so
/// the pair is Pareto-minimal.
pub fn affine_envelope<T: Scalar>(window: &SeqWindow<T>) -> (T, T) {
    let v = window.values();
    let mut a = T::zero();
    for (m, &n) in v.iter().enumerate().skip(1) {
        a = a.max((n - v[0]) / from_usize(m));
    }
    let b = v[0].max(lit(MIN_AFFINE_INTERCEPT));
    // a*m + b can round below N_m at the maximizing index; step up until
    // the line genuinely dominates.
    for _ in 0..64 {
        if affine_margin(window, a, b) >= T::zero() {
            break;
        }
        a = if a == T::zero() {
            T::min_positive_value()
        } else {
            a + a * T::epsilon()
        };
    }
    (a, b)
}

fn affine_margin<T: Scalar>(window: &SeqWindow<T>, a: T, b: T) -> T {
    window
        .values()
        .iter()
        .enumerate()
        .map(|(m, &n)| a * from_usize(m) + b - n)
        .fold(T::infinity(), T::min)
}

/// Greatest element reachable in `depth` rounds: `T_0` is the pointwise max
/// of the generators and `T_{i+1} = max(T_i, T_i * T_i)` with `*` the
/// max-plus convolution. Both operations are monotone, so every closure
/// element of depth at most `i` is below `T_i`; the window is dominated by
/// some element iff it is dominated by `T_depth`.
fn dominate_custom<T: Scalar>(
    generators: &[Window<T>],
    depth: usize,
    window: &Window<T>,
) -> Result<DominationResult<T>> {
    let target = Block::from_window(window);
    let mut top = Block::from_window(&generators[0]);
    if top.rows < target.rows || top.cols < target.cols {
        return Err(Error::WindowTooLarge {
            window: format!("{}x{}", target.rows, target.cols),
            generators: format!("{}x{}", top.rows, top.cols),
        });
    }
    for g in &generators[1..] {
        top = top.max(&Block::from_window(g));
    }
    let mut slack = top.slack_over(&target).expect("shapes checked");
    let mut used = 0;
    while slack < T::zero() && used < depth {
        let next = top.max(&top.maxplus(&top));
        if next == top {
            break;
        }
        top = next;
        used += 1;
        slack = top.slack_over(&target).expect("shapes preserved");
    }
    let feasible = slack >= T::zero();
    debug_assert!(!feasible || top.covers(&target));
    Ok(DominationResult {
        feasible,
        witness: feasible.then(|| Witness::Element {
            window: top.to_window(),
            depth: used,
        }),
        margin: slack,
        window_shape: (target.rows, target.cols),
    })
}
