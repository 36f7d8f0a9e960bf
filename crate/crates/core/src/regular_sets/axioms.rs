//! Randomized checks of the closure axioms with explicit witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::closure::{Block, ClosureLevels, ClosureOps, CONSTANT_RANGE, SHIFT_RANGE};
use super::{Arity, RegularSetSpec, SetKind, Witness};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

/// Closure elements kept when searching witnesses for custom sets.
const CLOSURE_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    /// `N_{m+k} + k' <= N'_m`.
    R1,
    /// `max(N_m, N'_m) <= N''_m`.
    R2,
    /// `N_{l1} + N'_{l2} <= N''_{l1+l2}`.
    R3,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::R1, Axiom::R2, Axiom::R3];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Pass,
    Fail,
    /// No witness found within the closure budget; not a disproof.
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomOutcome<T> {
    pub axiom: Axiom,
    pub status: AxiomStatus,
    pub passed: usize,
    pub failed: usize,
    pub unverified: usize,
    /// Witness from the first trial that found one, checked pointwise.
    pub example: Option<Witness<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport<T> {
    pub spec: String,
    pub window_size: usize,
    pub trials: usize,
    pub seed: u64,
    /// Size of the explored closure for custom sets, and whether the
    /// element budget cut the search short.
    pub closure: Option<ClosureStats>,
    pub outcomes: Vec<AxiomOutcome<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureStats {
    pub elements: usize,
    pub truncated: bool,
}

impl<T> AxiomReport<T> {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == AxiomStatus::Pass)
    }

    pub fn outcome(&self, axiom: Axiom) -> Option<&AxiomOutcome<T>> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }
}

/// Parameters of the affine witness for one axiom application.
///
/// For R1 the inputs are `first = (a, b)`, the shift `k` and constant
/// `k_prime`; `second` is ignored. R2 and R3 combine `first` and `second`.
pub fn affine_witness<T: Scalar>(axiom: Axiom, first: (T, T), second: (T, T), k: usize, k_prime: T) -> (T, T) {
    let (a, b) = first;
    let (a2, b2) = second;
    match axiom {
        Axiom::R1 => (a, a * from_usize(k) + b + k_prime),
        Axiom::R2 => (a.max(a2), b.max(b2)),
        Axiom::R3 => (a + a2, b + b2),
    }
}

/// Bound of the constant witness for one axiom application.
pub fn bounded_witness<T: Scalar>(axiom: Axiom, c: T, c2: T, k_prime: T) -> T {
    match axiom {
        Axiom::R1 => c + k_prime,
        Axiom::R2 => c.max(c2),
        Axiom::R3 => c + c2,
    }
}

/// Random element of one of the analytic families together with its
/// family parameters.
#[derive(Clone)]
struct Sample<T> {
    block: Block<T>,
    params: Params<T>,
}

#[derive(Clone, Copy)]
enum Params<T> {
    None,
    Bound(T),
    Line(T, T),
}

struct Trial<T> {
    axiom: Axiom,
    target: Block<T>,
    witness: Option<(Block<T>, Witness<T>)>,
}

/// Checks R1-R3 (or their double-sequence analogues) on `trials` random
/// applications per axiom, over windows of `window_size` indices per
/// dimension.
pub fn verify_axioms<T: Scalar>(
    spec: &RegularSetSpec<T>,
    window_size: usize,
    trials: usize,
    rng_seed: u64,
) -> Result<AxiomReport<T>> {
    if window_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "window_size must be at least 2, got {window_size}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut closure = None;
    let outcomes = match spec.kind() {
        SetKind::Custom { generators } => {
            let gens: Vec<Block<T>> = generators.iter().map(Block::from_window).collect();
            if gens[0].rows < window_size || (!gens[0].single && gens[0].cols < window_size) {
                return Err(Error::WindowTooLarge {
                    window: window_size.to_string(),
                    generators: format!("{}x{}", gens[0].rows, gens[0].cols),
                });
            }
            let levels = ClosureLevels::build(
                &gens,
                spec.closure_depth(),
                ClosureOps {
                    shifts: true,
                    max_elements: CLOSURE_BUDGET,
                },
            );
            closure = Some(ClosureStats {
                elements: levels.len(),
                truncated: levels.truncated,
            });
            custom_outcomes(&levels, spec.closure_depth(), window_size, trials, &mut rng)
        }
        _ => analytic_outcomes(spec, window_size, trials, &mut rng),
    };
    Ok(AxiomReport {
        spec: spec.label(),
        window_size,
        trials,
        seed: rng_seed,
        closure,
        outcomes,
    })
}

fn analytic_outcomes<T: Scalar>(
    spec: &RegularSetSpec<T>,
    w: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<AxiomOutcome<T>> {
    let single = spec.arity() == Arity::Single;
    let (rows, cols) = if single { (w, 1) } else { (w, w) };
    let ext_cols = if single { 1 } else { cols + SHIFT_RANGE };
    Axiom::ALL
        .iter()
        .map(|&axiom| {
            let mut acc = Accumulator::new(axiom);
            for _ in 0..trials {
                let x = sample(spec.kind(), rows + SHIFT_RANGE, ext_cols, single, rng);
                let y = sample(spec.kind(), rows + SHIFT_RANGE, ext_cols, single, rng);
                let (kq, kl, kp) = draw_shift(single, rng);
                let target = combine(axiom, &x.block, &y.block, kq, kl, kp).truncate(rows, cols);
                let witness = analytic_witness(axiom, &x, &y, kq, kp, &target);
                acc.record(Trial {
                    axiom,
                    target,
                    witness: Some(witness),
                });
            }
            acc.finish()
        })
        .collect()
}

fn custom_outcomes<T: Scalar>(
    closure: &ClosureLevels<T>,
    depth: usize,
    w: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<AxiomOutcome<T>> {
    let single = closure.levels[0][0].single;
    let source_levels = depth.max(1).min(closure.levels.len());
    let sources: Vec<&Block<T>> = closure.levels[..source_levels].iter().flatten().collect();
    let cols = if single { 1 } else { w };
    Axiom::ALL
        .iter()
        .map(|&axiom| {
            let mut acc = Accumulator::new(axiom);
            for _ in 0..trials {
                let x = sources[rng.gen_range(0..sources.len())];
                let y = sources[rng.gen_range(0..sources.len())];
                let (kq, kl, _) = draw_shift::<T>(single, rng);
                let kp: T = from_usize(rng.gen_range(0..=CONSTANT_RANGE));
                let full = combine(axiom, x, y, kq, kl, kp);
                let target = full.truncate(w.min(full.rows), cols.min(full.cols));
                let witness = closure.iter().find(|(_, b)| b.covers(&target)).map(|(d, b)| {
                    (
                        b.clone(),
                        Witness::Element {
                            window: b.to_window(),
                            depth: d,
                        },
                    )
                });
                acc.record(Trial {
                    axiom,
                    target,
                    witness,
                });
            }
            acc.finish()
        })
        .collect()
}

fn draw_shift<T: Scalar>(single: bool, rng: &mut ChaCha8Rng) -> (usize, usize, T) {
    let kq = rng.gen_range(0..=SHIFT_RANGE);
    let kl = if single { 0 } else { rng.gen_range(0..=SHIFT_RANGE) };
    let kp = lit(rng.gen_range(0.0..=5.0));
    (kq, kl, kp)
}

/// The least sequence the axiom requires to be dominated.
fn combine<T: Scalar>(axiom: Axiom, x: &Block<T>, y: &Block<T>, kq: usize, kl: usize, kp: T) -> Block<T> {
    match axiom {
        Axiom::R1 => x.shift(kq, kl, kp).expect("shift within extended window"),
        Axiom::R2 => x.max(y),
        Axiom::R3 => x.maxplus(y),
    }
}

fn sample<T: Scalar>(kind: &SetKind<T>, rows: usize, cols: usize, single: bool, rng: &mut ChaCha8Rng) -> Sample<T> {
    // Entries stay a fixed fraction below the family bound so rounding in
    // the witness arithmetic cannot reach them.
    let mut frac = || lit::<T>(rng.gen_range(0.0..0.999));
    match kind {
        SetKind::All | SetKind::Custom { .. } => {
            let mut values = Vec::with_capacity(rows * cols);
            for q in 0..rows {
                for l in 0..cols {
                    let scale = from_usize::<T>(1 + (q + l) * (q + l));
                    values.push(scale * lit(10.0) * frac());
                }
            }
            Sample {
                block: Block { rows, cols, single, values },
                params: Params::None,
            }
        }
        SetKind::Bounded => {
            let c = lit::<T>(0.5) + lit::<T>(10.0) * frac();
            let values = (0..rows * cols).map(|_| c * frac()).collect();
            Sample {
                block: Block { rows, cols, single, values },
                params: Params::Bound(c),
            }
        }
        SetKind::Affine => {
            let a = lit::<T>(3.0) * frac();
            let b = lit::<T>(0.1) + lit::<T>(5.0) * frac();
            let values = (0..rows).map(|m| (a * from_usize(m) + b) * frac()).collect();
            Sample {
                block: Block { rows, cols: 1, single: true, values },
                params: Params::Line(a, b),
            }
        }
    }
}

fn analytic_witness<T: Scalar>(
    axiom: Axiom,
    x: &Sample<T>,
    y: &Sample<T>,
    kq: usize,
    kp: T,
    target: &Block<T>,
) -> (Block<T>, Witness<T>) {
    let (rows, cols, single) = (target.rows, target.cols, target.single);
    match (x.params, y.params) {
        (Params::Bound(c), Params::Bound(c2)) => {
            let c = bounded_witness(axiom, c, c2, kp);
            (Block::constant(rows, cols, single, c), Witness::Constant { c })
        }
        (Params::Line(a, b), Params::Line(a2, b2)) => {
            let (a, b) = affine_witness(axiom, (a, b), (a2, b2), kq, kp);
            let block = Block {
                rows,
                cols: 1,
                single: true,
                values: (0..rows).map(|m| a * from_usize(m) + b).collect(),
            };
            (block, Witness::Affine { a, b })
        }
        _ => {
            // Every non-negative sequence belongs; the combination is its
            // own witness.
            (
                target.clone(),
                Witness::Element {
                    window: target.to_window(),
                    depth: 0,
                },
            )
        }
    }
}

struct Accumulator<T> {
    axiom: Axiom,
    passed: usize,
    failed: usize,
    unverified: usize,
    example: Option<Witness<T>>,
}

impl<T: Scalar> Accumulator<T> {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            passed: 0,
            failed: 0,
            unverified: 0,
            example: None,
        }
    }

    fn record(&mut self, trial: Trial<T>) {
        debug_assert_eq!(trial.axiom, self.axiom);
        match trial.witness {
            Some((block, witness)) if block.covers(&trial.target) => {
                self.passed += 1;
                self.example.get_or_insert(witness);
            }
            Some(_) => self.failed += 1,
            None => self.unverified += 1,
        }
    }

    fn finish(self) -> AxiomOutcome<T> {
        let status = if self.failed > 0 {
            AxiomStatus::Fail
        } else if self.unverified > 0 {
            AxiomStatus::Unverified
        } else {
            AxiomStatus::Pass
        };
        AxiomOutcome {
            axiom: self.axiom,
            status,
            passed: self.passed,
            failed: self.failed,
            unverified: self.unverified,
            example: self.example,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular_sets::{SeqWindow, Window};

    #[test]
    fn standard_sets_pass() {
        for spec in [
            RegularSetSpec::<f64>::all(Arity::Single),
            RegularSetSpec::all(Arity::Double),
            RegularSetSpec::bounded(Arity::Single),
            RegularSetSpec::bounded(Arity::Double),
            RegularSetSpec::affine(),
        ] {
            let report = verify_axioms(&spec, 6, 50, 7).unwrap();
            assert!(report.all_pass(), "{}: {:?}", spec.label(), report.outcomes);
        }
    }

    #[test]
    fn affine_sum_witness() {
        assert_eq!(affine_witness(Axiom::R3, (1.0, 1.0), (2.0, 3.0), 0, 0.0), (3.0, 4.0));
        assert_eq!(affine_witness(Axiom::R1, (2.0, 1.0), (0.0, 0.0), 3, 0.5), (2.0, 7.5));
        assert_eq!(bounded_witness(Axiom::R1, 2.0, 0.0, 5.0), 7.0);
    }

    #[test]
    fn custom_closure_finds_witnesses() {
        let g = SeqWindow::from_fn(9, |m| m as f64).unwrap();
        let spec = RegularSetSpec::custom(vec![Window::Single(g)], 2).unwrap();
        let report = verify_axioms(&spec, 6, 20, 3).unwrap();
        for o in &report.outcomes {
            assert_ne!(o.status, AxiomStatus::Fail);
            assert!(o.passed > 0, "{o:?}");
        }
    }

    #[test]
    fn parameters_validated() {
        let spec = RegularSetSpec::<f64>::all(Arity::Single);
        assert!(verify_axioms(&spec, 1, 10, 0).is_err());
        assert!(verify_axioms(&spec, 4, 0, 0).is_err());
        let g = SeqWindow::from_fn(2, |m| m as f64).unwrap();
        let custom = RegularSetSpec::custom(vec![Window::Single(g)], 2).unwrap();
        assert!(matches!(verify_axioms(&custom, 5, 10, 0), Err(Error::WindowTooLarge { .. })));
    }
}
