//! Structure functions, feasible sets `K = {x : f(x) ≤ η}` and the
//! Euclidean projections onto them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{norm_l1, norm_l2, SignalVector};

/// Absolute slack used by [`FeasibleSet::contains`].
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// The structure-inducing function `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    /// Count of nonzero entries. Scale invariant, so not absolutely homogeneous.
    L0,
    L1,
    L2,
}

impl StructureKind {
    /// Whether `f(αx) = |α| f(x)` holds for every scalar `α`.
    pub fn is_absolutely_homogeneous(self) -> bool {
        !matches!(self, StructureKind::L0)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::L0 => "l0",
            StructureKind::L1 => "l1",
            StructureKind::L2 => "l2",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `K = {x : f(x) ≤ eta}`. For `L0` the radius is an integer sparsity budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleSet {
    kind: StructureKind,
    eta: f64,
}

impl FeasibleSet {
    pub fn new(kind: StructureKind, eta: f64) -> Result<Self> {
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::InvalidRadius(eta));
        }
        if kind == StructureKind::L0 && eta.fract() != 0.0 {
            return Err(Error::Validation(format!(
                "l0 budget must be an integer, got {eta}"
            )));
        }
        Ok(FeasibleSet { kind, eta })
    }

    pub fn l0(budget: usize) -> Self {
        FeasibleSet {
            kind: StructureKind::L0,
            eta: budget as f64,
        }
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn value(&self, x: &SignalVector) -> f64 {
        structure_value(self.kind, x)
    }

    pub fn contains(&self, x: &SignalVector) -> bool {
        self.value(x) <= self.eta + MEMBERSHIP_TOL
    }

    /// Projects `x` in place; the slice form used inside solver loops.
    pub(crate) fn project_in_place(&self, x: &mut [f64]) -> Result<()> {
        match self.kind {
            StructureKind::L1 => project_l1_in_place(x, self.eta),
            StructureKind::L2 => project_l2_in_place(x, self.eta),
            StructureKind::L0 => hard_threshold_in_place(x, self.eta as usize),
        }
    }
}

/// `f(x)`: exact-zero count for `L0`, the usual norms otherwise.
pub fn structure_value(kind: StructureKind, x: &SignalVector) -> f64 {
    slice_value(kind, x.as_slice())
}

pub(crate) fn slice_value(kind: StructureKind, x: &[f64]) -> f64 {
    match kind {
        StructureKind::L0 => x.iter().filter(|v| **v != 0.0).count() as f64,
        StructureKind::L1 => norm_l1(x),
        StructureKind::L2 => norm_l2(x),
    }
}

fn check_radius(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadius(eta))
    }
}

/// Euclidean projection onto `{‖r‖₁ ≤ eta}` by sorting magnitudes and
/// soft-thresholding at the KKT level.
pub fn project_l1_ball(x: &SignalVector, eta: f64) -> Result<SignalVector> {
    let mut r = x.as_slice().to_vec();
    project_l1_in_place(&mut r, eta)?;
    Ok(SignalVector::from_vec_unchecked(r))
}

pub(crate) fn project_l1_in_place(x: &mut [f64], eta: f64) -> Result<()> {
    check_radius(eta)?;
    if norm_l1(x) <= eta {
        return Ok(());
    }
    let theta = l1_threshold(x, eta);
    for v in x.iter_mut() {
        *v = v.signum() * (v.abs() - theta).max(0.0);
    }
    Ok(())
}

/// Threshold `θ` with `Σ max(|x_i| − θ, 0) = eta`, assuming `‖x‖₁ > eta`.
fn l1_threshold(x: &[f64], eta: f64) -> f64 {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, u) in mags.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - eta) / (j + 1) as f64;
        if *u > candidate {
            theta = candidate;
        } else {
            break;
        }
    }
    theta.max(0.0)
}

/// Euclidean projection onto `{‖r‖₂ ≤ eta}` (radial scaling).
pub fn project_l2_ball(x: &SignalVector, eta: f64) -> Result<SignalVector> {
    let mut r = x.as_slice().to_vec();
    project_l2_in_place(&mut r, eta)?;
    Ok(SignalVector::from_vec_unchecked(r))
}

pub(crate) fn project_l2_in_place(x: &mut [f64], eta: f64) -> Result<()> {
    check_radius(eta)?;
    let norm = norm_l2(x);
    // Points within the membership tolerance count as inside, so the
    // round-off of one rescale never triggers a second one.
    if norm > eta + MEMBERSHIP_TOL {
        let scale = eta / norm;
        x.iter_mut().for_each(|v| *v *= scale);
    }
    Ok(())
}

/// Keeps the `s` largest-magnitude entries. Ties go to the lower index.
pub fn hard_threshold(x: &SignalVector, s: usize) -> Result<SignalVector> {
    let mut r = x.as_slice().to_vec();
    hard_threshold_in_place(&mut r, s)?;
    Ok(SignalVector::from_vec_unchecked(r))
}

pub(crate) fn hard_threshold_in_place(x: &mut [f64], s: usize) -> Result<()> {
    let n = x.len();
    if s > n {
        return Err(Error::InvalidBudget { budget: s, n });
    }
    if s == n {
        return Ok(());
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ascending index order among equal magnitudes.
    order.sort_by(|&i, &j| {
        x[j].abs()
            .partial_cmp(&x[i].abs())
            .unwrap_or(Ordering::Equal)
    });
    for &i in &order[s..] {
        x[i] = 0.0;
    }
    Ok(())
}

/// `P_K(x)`. For `L0` this is one admissible minimizer among possibly many.
pub fn project(k: &FeasibleSet, x: &SignalVector) -> Result<SignalVector> {
    let mut r = x.as_slice().to_vec();
    k.project_in_place(&mut r)?;
    Ok(SignalVector::from_vec_unchecked(r))
}

/// Minkowski functional `‖x‖_K = inf{λ > 0 : x/λ ∈ K} = f(x)/eta`.
pub fn minkowski_functional(k: &FeasibleSet, x: &SignalVector) -> Result<f64> {
    if !k.kind.is_absolutely_homogeneous() {
        return Err(Error::UnsupportedKind(k.kind));
    }
    check_radius(k.eta)?;
    Ok(k.value(x) / k.eta)
}

/// `x^η = (eta / f(x)) x`, the point on the boundary of `K` along `x`.
pub fn rescale_to_radius(k: &FeasibleSet, x: &SignalVector) -> Result<SignalVector> {
    if !k.kind.is_absolutely_homogeneous() {
        return Err(Error::UnsupportedKind(k.kind));
    }
    let fx = k.value(x);
    if fx == 0.0 {
        return Err(Error::DegenerateSignal("f(x) = 0 cannot be rescaled"));
    }
    Ok(x.scaled(k.eta / fx))
}
