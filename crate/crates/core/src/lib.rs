//! Numerical characterization of moderate and negligible nets of smooth
//! functions on boxes, with growth scales described by regular sets of
//! sequences.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod characterize;
pub mod error;
pub mod fourier;
pub mod nets;
pub mod regular_sets;
pub mod scalar;
pub mod suite;

pub use asymptotics::{CellFit, DecayClass, ExponentFit, ExponentProfile, FitConfig, FitWindow, ScaleKind};
pub use characterize::{BoundReport, BoundStatus, ReportStatus, TheoremId};
pub use error::{Error, Result};
pub use nets::{DerivativeMode, GridPolicy};
pub use regular_sets::{Arity, Axiom, AxiomStatus, SetKind};
pub use scalar::Scalar;

pub type SeqWindow = regular_sets::SeqWindow<f64>;
pub type DoubleSeqWindow = regular_sets::DoubleSeqWindow<f64>;
pub type Window = regular_sets::Window<f64>;
pub type RegularSetSpec = regular_sets::RegularSetSpec<f64>;
pub type DominationResult = regular_sets::DominationResult<f64>;
pub type AxiomReport = regular_sets::AxiomReport<f64>;
pub type Interval = nets::Interval<f64>;
pub type BoxDomain = nets::BoxDomain<f64>;
pub type EpsilonGrid = nets::EpsilonGrid<f64>;
pub type Factor = nets::Factor<f64>;
pub type Amplitude = nets::Amplitude<f64>;
pub type Family = nets::Family<f64>;
pub type Net = nets::Net<f64>;
pub type SampleGrid = nets::SampleGrid<f64>;
pub type SeminormProfile = asymptotics::SeminormProfile<f64>;
pub type MembershipVerdict = asymptotics::MembershipVerdict<f64>;
pub type CheckConfig = characterize::CheckConfig<f64>;
pub type TheoremReport = characterize::TheoremReport<f64>;
pub type SuiteNet = suite::SuiteNet<f64>;
