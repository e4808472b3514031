//! Gaussian sensing matrices, the linear and magnitude measurement models,
//! noise generators, and Monte Carlo checkers for the concentration
//! inequalities behind the error bounds.
//!
//! The checkers work over finite probe sets rather than the full sets the
//! inequalities quantify over. Each trial draws its matrix from its own
//! substream, so frequencies do not depend on the thread count.

use std::sync::Arc;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Distribution, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::V0;
use crate::error::{Error, Result};
use crate::geometry::{gaussian_width_mc, phi, WidthSet};
use crate::matrix::DenseMatrix;
use crate::rng::{fill_standard_normal, RngSpec};
use crate::signal::{norm_l1, norm_l2, SignalVector};

/// Slack subtracted from (or added to) every probability threshold.
pub const FREQUENCY_SLACK: f64 = 0.05;

/// Monte Carlo draws used for probe-set widths inside the checkers.
pub const PROBE_WIDTH_SAMPLES: usize = 2000;

/// Additive measurement noise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    #[default]
    None,
    Gaussian { sigma: f64 },
    /// `⌊fraction·m⌋` entries of value `±magnitude` at random positions.
    SparseAdversarial { fraction: f64, magnitude: f64 },
    /// Student-t with `dof` degrees of freedom, multiplied by `scale`.
    #[serde(alias = "heavy_tailed_student_t")]
    StudentT { dof: f64, scale: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::Validation(format!("noise {what} = {v}")));
        match *self {
            NoiseSpec::None => Ok(()),
            NoiseSpec::Gaussian { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
                bad("sigma", sigma)
            }
            NoiseSpec::SparseAdversarial { fraction, .. } if !(0.0..1.0).contains(&fraction) => {
                bad("fraction", fraction)
            }
            NoiseSpec::SparseAdversarial { magnitude, .. }
                if !(magnitude >= 0.0 && magnitude.is_finite()) =>
            {
                bad("magnitude", magnitude)
            }
            NoiseSpec::StudentT { dof, .. } if !(dof > 0.0 && dof.is_finite()) => bad("dof", dof),
            NoiseSpec::StudentT { scale, .. } if !(scale >= 0.0 && scale.is_finite()) => {
                bad("scale", scale)
            }
            _ => Ok(()),
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            NoiseSpec::None => "none",
            NoiseSpec::Gaussian { .. } => "gaussian",
            NoiseSpec::SparseAdversarial { .. } => "sparse_adversarial",
            NoiseSpec::StudentT { .. } => "student_t",
        }
    }

    /// The scale parameter reported alongside the kind: `sigma`,
    /// `magnitude` or `scale`.
    pub fn scale(&self) -> f64 {
        match *self {
            NoiseSpec::None => 0.0,
            NoiseSpec::Gaussian { sigma } => sigma,
            NoiseSpec::SparseAdversarial { magnitude, .. } => magnitude,
            NoiseSpec::StudentT { scale, .. } => scale,
        }
    }
}

/// `m × n` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(m: usize, n: usize, rng: &RngSpec) -> Result<DenseMatrix> {
    DenseMatrix::standard_gaussian(m, n, rng)
}

/// A noise realization of length `m`.
pub fn make_noise(spec: &NoiseSpec, m: usize, rng: &RngSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::InvalidDimension("noise length must be >= 1".into()));
    }
    let mut r = rng.rng();
    let mut e = vec![0.0; m];
    match *spec {
        NoiseSpec::None => {}
        NoiseSpec::Gaussian { sigma } => {
            fill_standard_normal(&mut r, &mut e);
            e.iter_mut().for_each(|v| *v *= sigma);
        }
        NoiseSpec::SparseAdversarial {
            fraction,
            magnitude,
        } => {
            let k = (fraction * m as f64).floor() as usize;
            for i in sample_indices(&mut r, m, k) {
                e[i] = if r.random::<bool>() { magnitude } else { -magnitude };
            }
        }
        NoiseSpec::StudentT { dof, scale } => {
            let t = StudentT::new(dof).map_err(|err| Error::Validation(err.to_string()))?;
            e.iter_mut().for_each(|v| *v = scale * t.sample(&mut r));
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    /// `y = A x + e`
    Linear,
    /// `y = |A x| + e`
    Magnitude,
}

/// Observations together with the noise that produced them and the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    kind: MeasurementKind,
    y: Vec<f64>,
    noise: Vec<f64>,
    matrix: Arc<DenseMatrix>,
}

impl MeasurementSet {
    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn matrix(&self) -> &Arc<DenseMatrix> {
        &self.matrix
    }
}

fn measure(
    kind: MeasurementKind,
    a: Arc<DenseMatrix>,
    x: &SignalVector,
    e: &[f64],
) -> Result<MeasurementSet> {
    if e.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: e.len(),
        });
    }
    let mut y = a.matvec(x.as_slice())?;
    for (yi, ei) in y.iter_mut().zip(e) {
        if kind == MeasurementKind::Magnitude {
            *yi = yi.abs();
        }
        *yi += ei;
    }
    Ok(MeasurementSet {
        kind,
        y,
        noise: e.to_vec(),
        matrix: a,
    })
}

pub fn measure_linear(
    a: impl Into<Arc<DenseMatrix>>,
    x: &SignalVector,
    e: &[f64],
) -> Result<MeasurementSet> {
    measure(MeasurementKind::Linear, a.into(), x, e)
}

pub fn measure_magnitude(
    a: impl Into<Arc<DenseMatrix>>,
    x: &SignalVector,
    e: &[f64],
) -> Result<MeasurementSet> {
    measure(MeasurementKind::Magnitude, a.into(), x, e)
}

/// Finite stand-in for a set `T ⊂ Rⁿ` in the concentration checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    points: Vec<SignalVector>,
}

impl ProbeSet {
    pub fn new(points: Vec<SignalVector>) -> Result<Self> {
        let n = points
            .first()
            .ok_or_else(|| Error::Validation("probe set is empty".into()))?
            .len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        Ok(ProbeSet { points })
    }

    /// `count` random unit vectors with `s` nonzero entries each.
    pub fn sparse_unit(n: usize, s: usize, count: usize, rng: &RngSpec) -> Result<Self> {
        if s == 0 || s > n || count == 0 {
            return Err(Error::Validation(format!(
                "sparse probes need 1 <= s <= n and count >= 1, got s = {s}, n = {n}, count = {count}"
            )));
        }
        let mut r = rng.rng();
        let points = (0..count)
            .map(|_| {
                let mut v = vec![0.0; n];
                let mut vals = vec![0.0; s];
                fill_standard_normal(&mut r, &mut vals);
                let norm = norm_l2(&vals);
                for (i, val) in sample_indices(&mut r, n, s).into_iter().zip(vals) {
                    v[i] = val / norm;
                }
                SignalVector::new(v)
            })
            .collect::<Result<Vec<_>>>()?;
        ProbeSet::new(points)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[SignalVector] {
        &self.points
    }

    pub fn push(&mut self, p: SignalVector) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        self.points.push(p);
        Ok(())
    }

    /// `E sup_{z∈T} |⟨g, z⟩|`, the width of `T ∪ −T`.
    pub fn width(&self, samples: usize, rng: &RngSpec) -> Result<f64> {
        let set = WidthSet::Finite {
            points: self.points.clone(),
            symmetric: true,
        };
        Ok(gaussian_width_mc(&set, samples, rng)?.mean)
    }

    fn width_default(&self, rng: &RngSpec) -> Result<f64> {
        self.width(PROBE_WIDTH_SAMPLES, &rng.substream(u64::MAX))
    }
}

/// Outcome of a frequency check: the event held in `successes` of `trials`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    /// Stated probability lower bound minus the slack.
    pub threshold: f64,
    /// Width estimate of the probe set, where one was needed.
    pub width: Option<f64>,
    pub pass: bool,
}

impl FrequencyReport {
    fn new(outcomes: &[bool], threshold: f64, width: Option<f64>) -> Self {
        let successes = outcomes.iter().filter(|b| **b).count();
        let frequency = successes as f64 / outcomes.len() as f64;
        FrequencyReport {
            trials: outcomes.len(),
            successes,
            frequency,
            threshold,
            width,
            pass: frequency >= threshold,
        }
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Validation("need at least one trial".into()));
    }
    Ok(())
}

fn run_trials<T: Send>(trials: usize, rng: &RngSpec, f: impl Fn(RngSpec) -> T + Sync) -> Vec<T> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| f(rng.substream(t)))
        .collect()
}

/// Frequency of `|‖Ax‖₂/φ(m) − ‖x‖₂| ≤ δ‖x‖₂` holding for every probe at
/// once. Refuses to run below `m ≥ (ω̂ + u)²/δ²`.
pub fn check_two_sided_deviation(
    probes: &ProbeSet,
    m: usize,
    trials: usize,
    delta: f64,
    u: f64,
    rng: &RngSpec,
) -> Result<FrequencyReport> {
    check_trials(trials)?;
    if !(delta > 0.0) || !(u > 0.0) {
        return Err(Error::Validation(format!(
            "need delta > 0 and u > 0, got delta = {delta}, u = {u}"
        )));
    }
    let omega = probes.width_default(rng)?;
    let needed = (omega + u).powi(2) / (delta * delta);
    if (m as f64) < needed {
        return Err(Error::Config(format!(
            "two-sided deviation needs m >= (w + u)^2 / delta^2 = {needed:.2}, got m = {m}"
        )));
    }
    let n = probes.dim();
    let phi_m = phi(m as f64)?;
    let outcomes = run_trials(trials, rng, |r| {
        let a = DenseMatrix::standard_gaussian(m, n, &r).expect("dimensions checked");
        probes.points().iter().all(|x| {
            let ax = a.matvec(x.as_slice()).expect("dimensions checked");
            let xn = x.norm_l2();
            (norm_l2(&ax) / phi_m - xn).abs() <= delta * xn
        })
    });
    let threshold = 1.0 - 2.0 * (-u * u / 2.0).exp() - FREQUENCY_SLACK;
    Ok(FrequencyReport::new(&outcomes, threshold, Some(omega)))
}

/// Statistics of `Z = sup_x |(1/m)‖Ax‖₁ − √(2/π)‖x‖₂|` over a probe set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1ConcentrationReport {
    pub trials: usize,
    pub mean_z: f64,
    pub stderr_z: f64,
    pub width: f64,
    /// `4ω̂/√m`
    pub mean_bound: f64,
    /// Fraction of trials with `Z > 4ω̂/√m + u`.
    pub tail_frequency: f64,
    /// `2 exp(−m u²/2)` plus the slack.
    pub tail_bound: f64,
    pub pass: bool,
}

pub fn check_l1_concentration(
    probes: &ProbeSet,
    m: usize,
    trials: usize,
    u: f64,
    rng: &RngSpec,
) -> Result<L1ConcentrationReport> {
    check_trials(trials)?;
    if m == 0 {
        return Err(Error::InvalidDimension("m must be >= 1".into()));
    }
    let omega = probes.width_default(rng)?;
    let n = probes.dim();
    let mean_abs = (2.0 / std::f64::consts::PI).sqrt();
    let zs = run_trials(trials, rng, |r| {
        let a = DenseMatrix::standard_gaussian(m, n, &r).expect("dimensions checked");
        probes
            .points()
            .iter()
            .map(|x| {
                let ax = a.matvec(x.as_slice()).expect("dimensions checked");
                (norm_l1(&ax) / m as f64 - mean_abs * x.norm_l2()).abs()
            })
            .fold(0.0, f64::max)
    });
    let count = zs.len() as f64;
    let mean_z = zs.iter().sum::<f64>() / count;
    let stderr_z = if zs.len() > 1 {
        (zs.iter().map(|z| (z - mean_z).powi(2)).sum::<f64>() / (count - 1.0) / count).sqrt()
    } else {
        0.0
    };
    let mean_bound = 4.0 * omega / (m as f64).sqrt();
    let tail_frequency = zs.iter().filter(|z| **z > mean_bound + u).count() as f64 / count;
    let tail_bound = 2.0 * (-(m as f64) * u * u / 2.0).exp() + FREQUENCY_SLACK;
    Ok(L1ConcentrationReport {
        trials,
        mean_z,
        stderr_z,
        width: omega,
        mean_bound,
        tail_frequency,
        tail_bound,
        pass: mean_z <= mean_bound + 3.0 * stderr_z && tail_frequency <= tail_bound,
    })
}

/// Smallest `‖A_Ω x̄‖₂` over row subsets with `|Ω| ≥ m/2`, attained by
/// keeping the `⌈m/2⌉` smallest `|⟨a_i, x̄⟩|`.
pub fn half_sample_min_norm(a: &DenseMatrix, xbar: &SignalVector) -> Result<f64> {
    let mut ax: Vec<f64> = a
        .matvec(xbar.as_slice())?
        .into_iter()
        .map(f64::abs)
        .collect();
    ax.sort_unstable_by(f64::total_cmp);
    let keep = ax.len().div_ceil(2);
    Ok(norm_l2(&ax[..keep]))
}

/// Frequency of `min_{|Ω| ≥ m/2} ‖A_Ω x̄‖₂ ≥ (v₀/2)√m ‖x̄‖₂`.
pub fn check_half_sample_lower(
    xbar: &SignalVector,
    m: usize,
    trials: usize,
    rng: &RngSpec,
) -> Result<FrequencyReport> {
    check_trials(trials)?;
    if xbar.norm_l2() == 0.0 {
        return Err(Error::DegenerateSignal("half-sample check needs a nonzero vector"));
    }
    if m < 8 {
        return Err(Error::Validation(format!("half-sample check needs m >= 8, got {m}")));
    }
    let n = xbar.len();
    let level = 0.5 * V0 * (m as f64).sqrt() * xbar.norm_l2();
    let outcomes = run_trials(trials, rng, |r| {
        let a = DenseMatrix::standard_gaussian(m, n, &r).expect("dimensions checked");
        half_sample_min_norm(&a, xbar).expect("dimensions checked") >= level
    });
    let threshold = 1.0 - 2.0 * (-V0 * V0 * m as f64 / 8.0).exp() - FREQUENCY_SLACK;
    Ok(FrequencyReport::new(&outcomes, threshold, None))
}

/// Frequency of `sup_x |⟨x, Aᵀe⟩| ≤ ‖e‖₂(ω̂ + u)`, with a fresh matrix and a
/// fresh `e` from `noise` in each trial. Probes must lie in the unit ball.
pub fn check_inner_product_bound(
    probes: &ProbeSet,
    m: usize,
    trials: usize,
    u: f64,
    noise: &NoiseSpec,
    rng: &RngSpec,
) -> Result<FrequencyReport> {
    check_trials(trials)?;
    if let Some(p) = probes.points().iter().find(|p| p.norm_l2() > 1.0 + 1e-12) {
        return Err(Error::Validation(format!(
            "probe of norm {} lies outside the unit ball",
            p.norm_l2()
        )));
    }
    let omega = probes.width_default(rng)?;
    let n = probes.dim();
    let outcomes = run_trials(trials, rng, |r| {
        let a = DenseMatrix::standard_gaussian(m, n, &r.substream(0)).expect("dimensions checked");
        let e = make_noise(noise, m, &r.substream(1)).expect("noise validated");
        let ate = a.tmatvec(&e).expect("dimensions checked");
        let sup = probes
            .points()
            .iter()
            .map(|x| x.as_slice().iter().zip(&ate).map(|(p, q)| p * q).sum::<f64>().abs())
            .fold(0.0, f64::max);
        sup <= norm_l2(&e) * (omega + u)
    });
    let threshold = 1.0 - 2.0 * (-u * u).exp() - FREQUENCY_SLACK;
    Ok(FrequencyReport::new(&outcomes, threshold, Some(omega)))
}
