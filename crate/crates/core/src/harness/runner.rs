use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gen_ground_truth, ExperimentConfig, ExperimentKind, ModelKind, TrialRecord};
use crate::bounds::{
    bound_clad_case1, bound_clad_case2, bound_cls_case1, bound_cls_case2, bound_cnls_case1,
    bound_cnls_case2, BoundInputs, BoundReport, CaseTag,
};
use crate::constraints::{project, structure_value, FeasibleSet, StructureKind};
use crate::error::Result;
use crate::geometry::{descent_cone_width, sample_size_m0};
use crate::matrix::DenseMatrix;
use crate::measurement::{gaussian_matrix, make_noise, measure_linear, measure_magnitude};
use crate::rng::{mix_seed, RngSpec};
use crate::signal::SignalVector;
use crate::solvers::{
    relative_error, sign_invariant_error, solve_clad, solve_cls, solve_cnls, RecoveryResult,
};

/// Relative error at or below which a phase-transition trial counts as a
/// success.
pub const PHASE_SUCCESS_TOL: f64 = 1e-3;

const WIDTH_STREAM_TAG: u64 = 0x57D7;

/// Substream tags inside one trial.
const SIGNAL: u64 = 1;
const MATRIX: u64 = 2;
const NOISE: u64 = 3;
const SOLVER: u64 = 4;
const DENSE_NOISE: u64 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTransitionRow {
    pub m: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// `φ⁻¹(ω̂ + u)` from the estimated descent-cone width.
    pub m0_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTransitionTable {
    pub width: f64,
    pub rows: Vec<PhaseTransitionRow>,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentOutput {
    Records(Vec<TrialRecord>),
    PhaseTransition(PhaseTransitionTable),
}

impl ExperimentOutput {
    pub fn records(&self) -> &[TrialRecord] {
        match self {
            ExperimentOutput::Records(r) => r,
            ExperimentOutput::PhaseTransition(t) => &t.records,
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    match cfg.kind {
        ExperimentKind::MismatchSweep => run_mismatch_sweep(cfg).map(ExperimentOutput::Records),
        ExperimentKind::Robustness => run_robustness_comparison(cfg).map(ExperimentOutput::Records),
        ExperimentKind::PhaseTransition => {
            run_phase_transition(cfg).map(ExperimentOutput::PhaseTransition)
        }
    }
}

/// Grid cell coordinates of one trial.
#[derive(Debug, Clone, Copy)]
struct Job {
    m: usize,
    eta_index: usize,
    multiplier: f64,
    trial: u64,
}

fn jobs(cfg: &ExperimentConfig) -> Vec<Job> {
    let mut out = Vec::with_capacity(cfg.m_grid.len() * cfg.eta_grid.len() * cfg.trials);
    for &m in &cfg.m_grid {
        for (eta_index, &multiplier) in cfg.eta_grid.iter().enumerate() {
            for trial in 0..cfg.trials as u64 {
                out.push(Job {
                    m,
                    eta_index,
                    multiplier,
                    trial,
                });
            }
        }
    }
    out
}

impl Job {
    fn seed(&self, cfg: &ExperimentConfig) -> u64 {
        mix_seed(&[cfg.master_seed, self.m as u64, self.eta_index as u64, self.trial])
    }
}

/// Constraint radius `multiplier · f(x*)`. For `ℓ0` it is rounded to an
/// integer budget in `[1, n]`.
pub fn tuned_radius(kind: StructureKind, multiplier: f64, f_star: f64, n: usize) -> f64 {
    let eta = multiplier * f_star;
    match kind {
        StructureKind::L0 => eta.round().clamp(1.0, n as f64),
        _ => eta,
    }
}

/// Ground truth, measurements and constraint for one trial.
struct Problem {
    x_star: SignalVector,
    a: DenseMatrix,
    e: Vec<f64>,
    y_linear: Vec<f64>,
    y_magnitude: Vec<f64>,
    f_star: f64,
    k: FeasibleSet,
}

fn build_problem(cfg: &ExperimentConfig, job: &Job, seed: u64) -> Result<Problem> {
    let rng = RngSpec::new(seed, 0);
    let x_star = gen_ground_truth(cfg.n, cfg.s, &rng.substream(SIGNAL))?;
    let a = gaussian_matrix(job.m, cfg.n, &rng.substream(MATRIX))?;
    let mut e = make_noise(&cfg.noise, job.m, &rng.substream(NOISE))?;
    let dense = make_noise(&cfg.dense_noise, job.m, &rng.substream(DENSE_NOISE))?;
    e.iter_mut().zip(&dense).for_each(|(p, q)| *p += q);
    let f_star = structure_value(cfg.constraint_kind, &x_star);
    let k = FeasibleSet::new(
        cfg.constraint_kind,
        tuned_radius(cfg.constraint_kind, job.multiplier, f_star, cfg.n),
    )?;
    // The matrix is shared by reference count inside the measurement set;
    // only `y` is kept here.
    let y_linear = measure_linear(a.clone(), &x_star, &e)?.y().to_vec();
    let y_magnitude = measure_magnitude(a.clone(), &x_star, &e)?.y().to_vec();
    Ok(Problem {
        x_star,
        a,
        e,
        y_linear,
        y_magnitude,
        f_star,
        k,
    })
}

fn solve_model(
    model: ModelKind,
    cfg: &ExperimentConfig,
    p: &Problem,
    seed: u64,
) -> Result<(RecoveryResult, f64)> {
    let opts = crate::solvers::SolverOptions {
        rng: RngSpec::new(seed, SOLVER),
        ..cfg.solver.clone()
    };
    let result = match model {
        ModelKind::Cls => solve_cls(&p.a, &p.y_linear, &p.k, &opts)?,
        ModelKind::Clad => solve_clad(&p.a, &p.y_linear, &p.k, &opts)?,
        ModelKind::Cnls => solve_cnls(&p.a, &p.y_magnitude, &p.k, &opts)?,
    };
    let error = match model {
        ModelKind::Cnls => sign_invariant_error(&result.x_hat, &p.x_star)?,
        _ => relative_error(&result.x_hat, &p.x_star)? * p.x_star.norm_l2(),
    };
    Ok((result, error))
}

/// Bound matching the model and the side of the optimal tuning, or `None`
/// when its hypotheses fail.
fn attach_bound(model: ModelKind, cfg: &ExperimentConfig, width: f64, p: &Problem, m: usize) -> Option<BoundReport> {
    let bc = &cfg.bound_constants;
    let eta = p.k.eta();
    let case = CaseTag::select(eta, p.f_star);
    let proj_gap = match case {
        CaseTag::Case1FGeEta => project(&p.k, &p.x_star).ok()?.distance(&p.x_star).ok()?,
        CaseTag::Case2FLtEta => 0.0,
    };
    let inputs = BoundInputs {
        m: m as f64,
        m0: sample_size_m0(width, bc.u),
        m1: width * width,
        u: if model == ModelKind::Clad { bc.lad_u } else { bc.u },
        rho_multiplier: bc.rho_multiplier,
        rho: None,
        gamma: bc.gamma,
        beta: bc.beta,
        kind: cfg.constraint_kind,
        eta,
        f_star: p.f_star,
        norm_x_star: p.x_star.norm_l2(),
        proj_gap,
        noise_l2: crate::signal::norm_l2(&p.e),
        noise_l1: crate::signal::norm_l1(&p.e),
        ..BoundInputs::default()
    };
    let report = match (model, case) {
        (ModelKind::Cls, CaseTag::Case1FGeEta) => bound_cls_case1(&inputs),
        (ModelKind::Cls, CaseTag::Case2FLtEta) => bound_cls_case2(&inputs),
        (ModelKind::Clad, CaseTag::Case1FGeEta) => bound_clad_case1(&inputs),
        (ModelKind::Clad, CaseTag::Case2FLtEta) => bound_clad_case2(&inputs),
        (ModelKind::Cnls, CaseTag::Case1FGeEta) => bound_cnls_case1(&inputs),
        (ModelKind::Cnls, CaseTag::Case2FLtEta) => bound_cnls_case2(&inputs),
    };
    report.ok()
}

fn cone_width(cfg: &ExperimentConfig) -> Result<f64> {
    let rng = RngSpec::new(mix_seed(&[cfg.master_seed, WIDTH_STREAM_TAG]), 0);
    Ok(descent_cone_width(
        cfg.constraint_kind,
        cfg.n,
        cfg.s,
        cfg.bound_constants.width_samples,
        &rng,
    )?
    .mean)
}

fn run_trial(
    model: ModelKind,
    cfg: &ExperimentConfig,
    width: f64,
    job: &Job,
    seed: u64,
    p: &Problem,
) -> Result<TrialRecord> {
    let (result, error) = solve_model(model, cfg, p, seed)?;
    let bound = attach_bound(model, cfg, width, p, job.m);
    Ok(TrialRecord {
        trial_id: job.trial,
        m: job.m,
        n: cfg.n,
        s: cfg.s,
        eta: p.k.eta(),
        f_star: p.f_star,
        model,
        noise_kind: cfg.noise.kind_str().to_string(),
        noise_scale: cfg.noise.scale(),
        error,
        bound_value: bound.as_ref().map(|b| b.value),
        mismatch_term: bound.as_ref().map(|b| b.mismatch_term),
        iters: result.iterations,
        converged: result.converged,
        runtime_ms: if cfg.record_timing { result.wall_time_ms } else { 0.0 },
        seed,
    })
}

fn run_models(cfg: &ExperimentConfig, models: &[ModelKind]) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let width = cone_width(cfg)?;
    let per_job: Vec<Vec<TrialRecord>> = jobs(cfg)
        .par_iter()
        .map(|job| {
            let seed = job.seed(cfg);
            let p = build_problem(cfg, job, seed)?;
            models
                .iter()
                .map(|&model| run_trial(model, cfg, width, job, seed, &p))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

/// Error and matching bound for every `(m, η multiplier, trial)`, in that
/// nesting order.
pub fn run_mismatch_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_models(cfg, &[cfg.model])
}

/// Least squares and least absolute deviation on identical problems; each
/// trial yields a least-squares record followed by its paired LAD record.
pub fn run_robustness_comparison(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_models(cfg, &[ModelKind::Cls, ModelKind::Clad])
}

/// Success rates over `m_grid` at optimal tuning without noise.
pub fn run_phase_transition(cfg: &ExperimentConfig) -> Result<PhaseTransitionTable> {
    let records = run_models(cfg, &[cfg.model])?;
    let width = cone_width(cfg)?;
    let m0 = sample_size_m0(width, cfg.bound_constants.u);
    let rows = cfg
        .m_grid
        .iter()
        .map(|&m| {
            let cell: Vec<&TrialRecord> = records.iter().filter(|r| r.m == m).collect();
            // Ground truths have unit norm, so the error is relative.
            let successes = cell.iter().filter(|r| r.error <= PHASE_SUCCESS_TOL).count();
            PhaseTransitionRow {
                m,
                trials: cell.len(),
                successes,
                success_rate: successes as f64 / cell.len() as f64,
                m0_estimate: m0,
            }
        })
        .collect();
    Ok(PhaseTransitionTable {
        width,
        rows,
        records,
    })
}
