//! Regular sets of single and double sequences, observed through finite
//! windows.
//!
//! A regular set is closed under shift-plus-constant (R1), pointwise max (R2)
//! and index-additive sums (R3). Only finitely many indices are ever
//! measured, so membership is decided by domination over a window: a window
//! belongs to the set if some element of the set lies above it pointwise.

mod axioms;
mod closure;
mod envelope;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use axioms::{
    affine_witness, bounded_witness, verify_axioms, Axiom, AxiomOutcome, AxiomReport, AxiomStatus,
    ClosureStats,
};
pub use envelope::{affine_envelope, dominates, DominationResult, Witness};

/// Default number of closure rounds explored for custom sets.
pub const DEFAULT_CLOSURE_DEPTH: usize = 3;

/// Smallest intercept reported for an affine envelope; the affine family
/// requires a strictly positive intercept.
pub const MIN_AFFINE_INTERCEPT: f64 = 1e-12;

/// Dense window `N_0, ..., N_max_index` of a non-negative sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeqWindow<T> {
    values: Vec<T>,
}

impl<T: Scalar> SeqWindow<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        check_entries(&values)?;
        Ok(Self { values })
    }

    pub fn from_fn(max_index: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::new((0..=max_index).map(f).collect())
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Option<T> {
        self.values.get(m).copied()
    }

    /// Adds `delta` to every entry.
    pub fn lifted(&self, delta: T) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| v + delta).collect())
    }
}

/// Dense rectangular window `N_{q,l}` for `0 <= q <= max_q`, `0 <= l <= max_l`,
/// stored q-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleSeqWindow<T> {
    max_q: usize,
    max_l: usize,
    values: Vec<T>,
}

impl<T: Scalar> DoubleSeqWindow<T> {
    pub fn new(max_q: usize, max_l: usize, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if values.len() != (max_q + 1) * (max_l + 1) {
            return Err(Error::InvalidParameter(format!(
                "double window {}x{} needs {} values, got {}",
                max_q + 1,
                max_l + 1,
                (max_q + 1) * (max_l + 1),
                values.len()
            )));
        }
        check_entries(&values)?;
        Ok(Self {
            max_q,
            max_l,
            values,
        })
    }

    pub fn from_fn(max_q: usize, max_l: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity((max_q + 1) * (max_l + 1));
        for q in 0..=max_q {
            for l in 0..=max_l {
                values.push(f(q, l));
            }
        }
        Self::new(max_q, max_l, values)
    }

    pub fn max_q(&self) -> usize {
        self.max_q
    }

    pub fn max_l(&self) -> usize {
        self.max_l
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, q: usize, l: usize) -> Option<T> {
        if q > self.max_q || l > self.max_l {
            return None;
        }
        Some(self.values[q * (self.max_l + 1) + l])
    }

    /// `N_{., 0}`: the second index fixed to zero.
    pub fn row_zero(&self) -> SeqWindow<T> {
        SeqWindow {
            values: (0..=self.max_q).map(|q| self.values[q * (self.max_l + 1)]).collect(),
        }
    }

    /// `N_{0, .}`: the first index fixed to zero.
    pub fn col_zero(&self) -> SeqWindow<T> {
        SeqWindow {
            values: self.values[..=self.max_l].to_vec(),
        }
    }

    pub fn lifted(&self, delta: T) -> Result<Self> {
        Self::new(
            self.max_q,
            self.max_l,
            self.values.iter().map(|&v| v + delta).collect(),
        )
    }
}

fn check_entries<T: Scalar>(values: &[T]) -> Result<()> {
    if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "sequence entries must be finite and non-negative, found {bad}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    Single,
    Double,
}

impl Arity {
    pub fn name(self) -> &'static str {
        match self {
            Arity::Single => "single",
            Arity::Double => "double",
        }
    }
}

/// A window of either arity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Window<T> {
    Single(SeqWindow<T>),
    Double(DoubleSeqWindow<T>),
}

impl<T: Scalar> Window<T> {
    pub fn arity(&self) -> Arity {
        match self {
            Window::Single(_) => Arity::Single,
            Window::Double(_) => Arity::Double,
        }
    }

    /// `(rows, cols)`; single windows are one column wide.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Window::Single(w) => (w.len(), 1),
            Window::Double(w) => (w.max_q + 1, w.max_l + 1),
        }
    }

    pub fn values(&self) -> &[T] {
        match self {
            Window::Single(w) => &w.values,
            Window::Double(w) => &w.values,
        }
    }

    pub fn max_value(&self) -> T {
        self.values().iter().copied().fold(T::zero(), T::max)
    }
}

impl<T> From<SeqWindow<T>> for Window<T> {
    fn from(w: SeqWindow<T>) -> Self {
        Window::Single(w)
    }
}

impl<T> From<DoubleSeqWindow<T>> for Window<T> {
    fn from(w: DoubleSeqWindow<T>) -> Self {
        Window::Double(w)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetKind<T> {
    /// Every non-negative sequence.
    All,
    /// Bounded sequences.
    Bounded,
    /// Sequences below some line `a m + b` with `a >= 0`, `b > 0`.
    Affine,
    /// The closure of finitely many generators.
    Custom { generators: Vec<Window<T>> },
}

impl<T> SetKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            SetKind::All => "all",
            SetKind::Bounded => "bounded",
            SetKind::Affine => "affine",
            SetKind::Custom { .. } => "custom",
        }
    }
}

/// Computable description of a regular set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularSetSpec<T> {
    kind: SetKind<T>,
    arity: Arity,
    closure_depth: usize,
}

impl<T: Scalar> RegularSetSpec<T> {
    pub fn all(arity: Arity) -> Self {
        Self {
            kind: SetKind::All,
            arity,
            closure_depth: DEFAULT_CLOSURE_DEPTH,
        }
    }

    pub fn bounded(arity: Arity) -> Self {
        Self {
            kind: SetKind::Bounded,
            arity,
            closure_depth: DEFAULT_CLOSURE_DEPTH,
        }
    }

    /// The affine set exists for single sequences only.
    pub fn affine() -> Self {
        Self {
            kind: SetKind::Affine,
            arity: Arity::Single,
            closure_depth: DEFAULT_CLOSURE_DEPTH,
        }
    }

    pub fn custom(generators: Vec<Window<T>>, closure_depth: usize) -> Result<Self> {
        let first = generators.first().ok_or_else(|| {
            Error::InvalidParameter("a custom set needs at least one generator".into())
        })?;
        let arity = first.arity();
        let shape = first.shape();
        if let Some(g) = generators
            .iter()
            .find(|g| g.arity() != arity || g.shape() != shape)
        {
            return Err(Error::InvalidParameter(format!(
                "custom generators must share arity and window size; found {} {:?} next to {} {:?}",
                g.arity().name(),
                g.shape(),
                arity.name(),
                shape
            )));
        }
        Ok(Self {
            kind: SetKind::Custom { generators },
            arity,
            closure_depth,
        })
    }

    /// Builds a spec from parts, enforcing the same invariants as the
    /// dedicated constructors.
    pub fn from_parts(kind: SetKind<T>, arity: Arity, closure_depth: usize) -> Result<Self> {
        match kind {
            SetKind::All => Ok(Self::all(arity)),
            SetKind::Bounded => Ok(Self::bounded(arity)),
            SetKind::Affine if arity == Arity::Single => Ok(Self::affine()),
            SetKind::Affine => Err(Error::InvalidParameter(
                "the affine set is defined for single sequences only".into(),
            )),
            SetKind::Custom { generators } => {
                let spec = Self::custom(generators, closure_depth)?;
                if spec.arity != arity {
                    return Err(Error::ArityMismatch {
                        expected: arity.name(),
                        found: spec.arity.name(),
                    });
                }
                Ok(spec)
            }
        }
    }

    pub fn kind(&self) -> &SetKind<T> {
        &self.kind
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn closure_depth(&self) -> usize {
        self.closure_depth
    }

    pub fn with_closure_depth(mut self, depth: usize) -> Self {
        self.closure_depth = depth;
        self
    }

    /// Short label such as `bounded(double)`.
    pub fn label(&self) -> String {
        format!("{}({})", self.kind.name(), self.arity.name())
    }
}

/// `R^0 = { N_{., 0} : N in R~ }`.
pub fn project_row_zero<T: Scalar>(spec: &RegularSetSpec<T>) -> Result<RegularSetSpec<T>> {
    project(spec, DoubleSeqWindow::row_zero)
}

/// `R_0 = { N_{0, .} : N in R~ }`.
pub fn project_col_zero<T: Scalar>(spec: &RegularSetSpec<T>) -> Result<RegularSetSpec<T>> {
    project(spec, DoubleSeqWindow::col_zero)
}

fn project<T: Scalar>(
    spec: &RegularSetSpec<T>,
    restrict: fn(&DoubleSeqWindow<T>) -> SeqWindow<T>,
) -> Result<RegularSetSpec<T>> {
    if spec.arity != Arity::Double {
        return Err(Error::ArityMismatch {
            expected: "double",
            found: spec.arity.name(),
        });
    }
    let kind = match &spec.kind {
        SetKind::All => SetKind::All,
        SetKind::Bounded => SetKind::Bounded,
        SetKind::Affine => unreachable!("affine specs are single arity"),
        SetKind::Custom { generators } => SetKind::Custom {
            generators: generators
                .iter()
                .map(|g| match g {
                    Window::Double(w) => Window::Single(restrict(w)),
                    Window::Single(_) => unreachable!("arity checked at construction"),
                })
                .collect(),
        },
    };
    Ok(RegularSetSpec {
        kind,
        arity: Arity::Single,
        closure_depth: spec.closure_depth,
    })
}
