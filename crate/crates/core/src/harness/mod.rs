//! Experiment configuration and orchestration.
//!
//! A config fixes the model, constraint, grids, noise and seed. Trials fan
//! out over a rayon pool; every trial derives its randomness from
//! `(master_seed, m, eta_index, trial_id)`, and records come back in grid
//! order, so output does not depend on the thread count.

mod records;
mod runner;
mod verify;

use std::fmt;
use std::path::Path;

use rand::seq::index::sample as sample_indices;
use serde::{Deserialize, Serialize};

use crate::constraints::StructureKind;
use crate::error::{Error, Result};
use crate::measurement::NoiseSpec;
use crate::rng::{fill_standard_normal, RngSpec};
use crate::signal::SignalVector;
use crate::solvers::SolverOptions;

pub use records::{
    read_records_csv, read_records_json, write_phase_table_csv, write_records_csv,
    write_records_json, OutputFormat, TrialRecord, CSV_HEADER,
};
pub use runner::{
    run_experiment, run_mismatch_sweep, run_phase_transition, run_robustness_comparison, tuned_radius,
    ExperimentOutput, PhaseTransitionRow, PhaseTransitionTable, PHASE_SUCCESS_TOL,
};
pub use verify::{
    stated_confidence, verify_bounds, verify_bounds_with, CellCoverage, CoverageSummary,
    COVERAGE_ATOL,
};

/// The only config schema version understood.
pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Cls,
    Clad,
    Cnls,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Cls => "cls",
            ModelKind::Clad => "clad",
            ModelKind::Cnls => "cnls",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cls" => Ok(ModelKind::Cls),
            "clad" => Ok(ModelKind::Clad),
            "cnls" => Ok(ModelKind::Cnls),
            other => Err(Error::Validation(format!("unknown model '{other}'"))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[default]
    MismatchSweep,
    PhaseTransition,
    /// Least squares and least absolute deviation on identical problems.
    Robustness,
}

/// Constants used when attaching bounds to trial records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundConstants {
    /// Monte Carlo draws for the descent-cone width.
    pub width_samples: usize,
    /// Deviation parameter in `m₀ = φ⁻¹(ω + u)`.
    pub u: f64,
    /// `c` in `ρ = c √(m₀/m)`.
    pub rho_multiplier: f64,
    /// Deviation parameter of the least-absolute-deviation bound.
    pub lad_u: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            width_samples: 2000,
            u: 2.0,
            rho_multiplier: 1.0,
            lad_u: 0.1,
            gamma: 4.0,
            beta: 26.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub kind: ExperimentKind,
    pub model: ModelKind,
    pub constraint_kind: StructureKind,
    pub n: usize,
    pub s: usize,
    pub m_grid: Vec<usize>,
    /// Radii as multiples of `f(x*)`.
    pub eta_grid: Vec<f64>,
    #[serde(default)]
    pub noise: NoiseSpec,
    /// Extra dense noise added on top of `noise`.
    #[serde(default)]
    pub dense_noise: NoiseSpec,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub bound_constants: BoundConstants,
    /// Writes solver wall time into `runtime_ms`; off by default so output
    /// is byte-stable.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        ExperimentConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if self.schema != CONFIG_SCHEMA {
            return fail(format!("unsupported schema {}, expected {CONFIG_SCHEMA}", self.schema));
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if self.n == 0 || self.s == 0 || self.s > self.n {
            return fail(format!("need 1 <= s <= n, got s = {}, n = {}", self.s, self.n));
        }
        if self.m_grid.is_empty() || self.m_grid.contains(&0) {
            return fail("m_grid must be nonempty with positive entries".into());
        }
        let mut ms = self.m_grid.clone();
        ms.sort_unstable();
        ms.dedup();
        if ms.len() != self.m_grid.len() {
            return fail("m_grid entries must be distinct".into());
        }
        if self.eta_grid.is_empty() || self.eta_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return fail("eta_grid must be nonempty with positive multipliers".into());
        }
        self.noise.validate()?;
        self.dense_noise.validate()?;
        self.solver.validate()?;
        let bc = &self.bound_constants;
        if bc.width_samples < crate::geometry::MIN_WIDTH_SAMPLES {
            return fail(format!(
                "bound_constants.width_samples must be >= {}",
                crate::geometry::MIN_WIDTH_SAMPLES
            ));
        }
        if !(bc.u > 0.0) || !(bc.lad_u >= 0.0) || !(bc.rho_multiplier >= 1.0) {
            return fail("bound constants need u > 0, lad_u >= 0 and rho_multiplier >= 1".into());
        }
        match self.kind {
            ExperimentKind::MismatchSweep => {}
            ExperimentKind::PhaseTransition => {
                if self.eta_grid != [1.0] {
                    return fail("phase transition runs at eta_grid = [1.0]".into());
                }
                if self.noise != NoiseSpec::None || self.dense_noise != NoiseSpec::None {
                    return fail("phase transition runs noiseless".into());
                }
            }
            ExperimentKind::Robustness => {
                if !matches!(self.noise, NoiseSpec::SparseAdversarial { .. }) {
                    return fail("robustness comparison needs sparse_adversarial noise".into());
                }
            }
        }
        Ok(())
    }
}

/// An `s`-sparse unit vector with uniformly random support and Gaussian
/// entries.
pub fn gen_ground_truth(n: usize, s: usize, rng: &RngSpec) -> Result<SignalVector> {
    if s == 0 || s > n {
        return Err(Error::Validation(format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    let mut r = rng.rng();
    loop {
        let support = sample_indices(&mut r, n, s);
        let mut vals = vec![0.0; s];
        fill_standard_normal(&mut r, &mut vals);
        // A draw with an exact zero or a zero norm is redrawn; it has
        // probability zero but would break the sparsity contract.
        let norm = crate::signal::norm_l2(&vals);
        if norm == 0.0 || vals.contains(&0.0) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (i, v) in support.into_iter().zip(vals) {
            x[i] = v / norm;
        }
        return SignalVector::new(x);
    }
}

/// Runs `f` on a dedicated pool with `threads` workers, or on the current
/// pool when `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Validation("threads must be >= 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "name": "t",
            "model": "cls",
            "constraint_kind": "l1",
            "n": 16,
            "s": 2,
            "m_grid": [12],
            "eta_grid": [1.0],
            "trials": 2,
            "master_seed": 7
        })
    }

    #[test]
    fn config_parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(&base_json().to_string()).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::MismatchSweep);
        assert_eq!(cfg.noise, NoiseSpec::None);
        assert_eq!(cfg.solver, SolverOptions::default());
        assert!(!cfg.record_timing);
    }

    #[test]
    fn config_rejects_bad_input() {
        let mut v = base_json();
        v["typo"] = serde_json::json!(1);
        assert!(matches!(ExperimentConfig::from_json(&v.to_string()), Err(Error::Config(_))));
        for (key, val) in [
            ("schema", serde_json::json!(2)),
            ("trials", serde_json::json!(0)),
            ("m_grid", serde_json::json!([])),
            ("eta_grid", serde_json::json!([0.0])),
            ("s", serde_json::json!(17)),
        ] {
            let mut v = base_json();
            v[key] = val;
            assert!(ExperimentConfig::from_json(&v.to_string()).is_err(), "{key}");
        }
        let mut v = base_json();
        v["kind"] = serde_json::json!("robustness");
        assert!(ExperimentConfig::from_json(&v.to_string()).is_err());
        v["noise"] = serde_json::json!({"kind": "sparse_adversarial", "fraction": 1.0, "magnitude": 1.0});
        assert!(ExperimentConfig::from_json(&v.to_string()).is_err());
        v["noise"] = serde_json::json!({"kind": "sparse_adversarial", "fraction": 0.1, "magnitude": 1.0});
        assert!(ExperimentConfig::from_json(&v.to_string()).is_ok());
    }

    #[test]
    fn ground_truth_contract() {
        let x = gen_ground_truth(10, 10, &RngSpec::new(1, 0)).unwrap();
        assert_eq!(x.count_nonzero(), 10);
        for seed in 0..50 {
            let x = gen_ground_truth(40, 3, &RngSpec::new(seed, 1)).unwrap();
            assert_eq!(x.count_nonzero(), 3);
            assert!((x.norm_l2() - 1.0).abs() < 1e-12);
        }
        let rng = RngSpec::new(3, 3);
        assert_eq!(gen_ground_truth(20, 4, &rng).unwrap(), gen_ground_truth(20, 4, &rng).unwrap());
        assert!(gen_ground_truth(3, 4, &rng).is_err());
        assert!(gen_ground_truth(3, 0, &rng).is_err());
    }
}
