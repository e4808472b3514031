//! Recovery of structured signals from linear and magnitude-only
//! measurements under a possibly mis-specified structural constraint.
//!
//! The crate bundles projected solvers for constrained least squares, least
//! absolute deviation and nonlinear least squares, Monte Carlo Gaussian
//! widths, closed-form stability bounds and an experiment harness that ties
//! them together.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod constraints;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod matrix;
pub mod measurement;
pub mod rng;
pub mod signal;
pub mod solvers;

pub use bounds::{BoundInputs, BoundReport, CaseTag};
pub use constraints::{FeasibleSet, StructureKind};
pub use error::{Error, Result};
pub use geometry::{ConeSpec, WidthEstimate, WidthSet};
pub use harness::{ExperimentConfig, ModelKind, TrialRecord};
pub use matrix::DenseMatrix;
pub use measurement::{MeasurementKind, MeasurementSet, NoiseSpec};
pub use rng::RngSpec;
pub use signal::SignalVector;
pub use solvers::{InitPolicy, RecoveryResult, SolverOptions, StepPolicy};
