//! Closed-form error bounds and sample-size trade-offs for the three
//! recovery models.
//!
//! Every bound splits into a mismatch term, driven by `η ≠ f(x*)`, and a
//! noise term. Case 1 covers `η ≤ f(x*)` and charges the projection gap
//! `‖P_K(x*) − x*‖₂`; case 2 covers `η > f(x*)` and charges
//! `(η/f(x*) − 1)‖x*‖₂`. Constants hidden behind `≲` are explicit fields.

use std::f64::consts::{E, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraints::StructureKind;
use crate::error::{Error, Result};

/// `v₀ = (1/(32e)) √(π/2) (1 − 1/(4√π))` from the half-sample lower bound.
pub const V0: f64 = 0.012376124767813546;

/// Largest tolerable corruption fraction for the robust LAD bound.
pub const BETA0: f64 = 0.239;

/// `v₀` evaluated from its closed form.
pub fn v0() -> f64 {
    (1.0 / (32.0 * E)) * (PI / 2.0).sqrt() * (1.0 - 1.0 / (4.0 * PI.sqrt()))
}

fn sqrt_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

/// Which side of the optimal tuning a bound is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `f(x*) ≥ η`
    Case1FGeEta,
    /// `f(x*) < η`
    Case2FLtEta,
}

impl CaseTag {
    /// Case 1 iff `η ≤ f(x*)`.
    pub fn select(eta: f64, f_star: f64) -> CaseTag {
        if eta <= f_star {
            CaseTag::Case1FGeEta
        } else {
            CaseTag::Case2FLtEta
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Case1FGeEta => "case1_f_ge_eta",
            CaseTag::Case2FLtEta => "case2_f_lt_eta",
        })
    }
}

/// Everything the evaluators read. Unused fields are ignored by a given
/// evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundInputs {
    /// Number of measurements.
    pub m: f64,
    /// Sample-complexity surrogate `m₀` (or `m₀′` in case 2).
    pub m0: f64,
    /// `m₁ = ω²` for the LAD conditions.
    pub m1: f64,
    /// Deviation parameter.
    pub u: f64,
    /// Multiplier `c ≥ 1` in `ρ = c √(m₀/m)`.
    pub rho_multiplier: f64,
    /// Uses this rate directly instead of deriving it from the sample sizes.
    pub rho: Option<f64>,
    pub delta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub kind: StructureKind,
    pub eta: f64,
    pub f_star: f64,
    pub norm_x_star: f64,
    pub proj_gap: f64,
    pub noise_l2: f64,
    pub noise_l1: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub corruption_fraction: f64,
    /// Leading constant of the corruption bound.
    pub corruption_c: f64,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            m: 1.0,
            m0: 0.0,
            m1: 0.0,
            u: 1.0,
            rho_multiplier: 1.0,
            rho: None,
            delta: 0.5,
            gamma: 4.0,
            beta: 26.0,
            kind: StructureKind::L1,
            eta: 1.0,
            f_star: 1.0,
            norm_x_star: 1.0,
            proj_gap: 0.0,
            noise_l2: 0.0,
            noise_l1: 0.0,
            epsilon: 0.1,
            alpha: 20.0,
            corruption_fraction: 0.0,
            corruption_c: 1.0,
        }
    }
}

impl BoundInputs {
    fn validate(&self) -> Result<()> {
        let named = [
            ("m", self.m),
            ("m0", self.m0),
            ("m1", self.m1),
            ("u", self.u),
            ("eta", self.eta),
            ("f_star", self.f_star),
            ("norm_x_star", self.norm_x_star),
            ("proj_gap", self.proj_gap),
            ("noise_l2", self.noise_l2),
            ("noise_l1", self.noise_l1),
        ];
        for (name, v) in named {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.m > 0.0) {
            return Err(Error::Validation(format!("m must be positive, got {}", self.m)));
        }
        Ok(())
    }

    fn rate(&self) -> Result<f64> {
        match self.rho {
            Some(r) if (0.0..1.0).contains(&r) => Ok(r),
            Some(r) if r >= 1.0 => Err(Error::SampleBudget { rho: r }),
            Some(r) => Err(Error::Validation(format!("rho must be >= 0, got {r}"))),
            None => rho_rate(self.m0, self.m, self.rho_multiplier),
        }
    }

    fn case1(&self) -> Result<()> {
        if self.eta > self.f_star {
            return Err(Error::Validation(format!(
                "case 1 needs eta <= f(x*), got eta = {}, f(x*) = {}",
                self.eta, self.f_star
            )));
        }
        Ok(())
    }

    /// Case 2 preconditions; returns `η/f(x*) − 1`.
    fn case2(&self) -> Result<f64> {
        if !self.kind.is_absolutely_homogeneous() {
            return Err(Error::UnsupportedKind(self.kind));
        }
        if self.f_star == 0.0 {
            return Err(Error::DegenerateSignal("case 2 needs f(x*) > 0"));
        }
        if self.eta < self.f_star {
            return Err(Error::Validation(format!(
                "case 2 needs eta >= f(x*), got eta = {}, f(x*) = {}",
                self.eta, self.f_star
            )));
        }
        Ok(self.eta / self.f_star - 1.0)
    }

    fn noise_per_sqrt_m(&self) -> f64 {
        self.noise_l2 / self.m.sqrt()
    }
}

/// An evaluated bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub mismatch_term: f64,
    pub noise_term: f64,
    pub rho: f64,
    pub case_tag: CaseTag,
    pub theorem_tag: String,
    /// Probability with which the bound is stated to hold, clamped at 0.
    pub confidence: f64,
}

impl BoundReport {
    fn new(
        mismatch_term: f64,
        noise_term: f64,
        rho: f64,
        case_tag: CaseTag,
        theorem_tag: &str,
        confidence: f64,
    ) -> Self {
        BoundReport {
            value: mismatch_term + noise_term,
            mismatch_term,
            noise_term,
            rho,
            case_tag,
            theorem_tag: theorem_tag.to_string(),
            confidence: confidence.max(0.0),
        }
    }
}

/// `ρ = c √(m₀/m)`; rejects `ρ ≥ 1`.
pub fn rho_rate(m0: f64, m: f64, c: f64) -> Result<f64> {
    if !(m > 0.0) || !(m0 >= 0.0) {
        return Err(Error::Validation(format!("need m > 0 and m0 >= 0, got m = {m}, m0 = {m0}")));
    }
    if !(c >= 1.0) {
        return Err(Error::Validation(format!("rate multiplier must be >= 1, got {c}")));
    }
    let rho = c * (m0 / m).sqrt();
    if rho >= 1.0 {
        return Err(Error::SampleBudget { rho });
    }
    Ok(rho)
}

fn cls_confidence(u: f64) -> f64 {
    1.0 - 6.0 * (-u * u).exp()
}

fn cls_noise_coefficient(rho: f64) -> f64 {
    4.0 * 2f64.sqrt() * rho / (3.0 * (1.0 - rho)) + 4.0 * rho / (1.0 - rho).powi(2)
}

/// Least squares, `η ≤ f(x*)`.
pub fn bound_cls_case1(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    inp.case1()?;
    let rho = inp.rate()?;
    let mismatch = 3.0 * 2f64.sqrt() / (2.0 * (1.0 - rho)) * inp.proj_gap;
    let noise = cls_noise_coefficient(rho) * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case1FGeEta, "cls", cls_confidence(inp.u)))
}

/// Least squares, `η > f(x*)`, absolutely homogeneous `f` only.
pub fn bound_cls_case2(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    let ratio = inp.case2()?;
    let rho = inp.rate()?;
    let q = (1.0 - rho).powi(2);
    let mismatch = (6.0 * rho / q + 1.0) * ratio * inp.norm_x_star;
    let noise = 4.0 * rho / q * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case2FLtEta, "cls", cls_confidence(inp.u)))
}

/// `ρ = (1/δ)√(m₀/m)` after checking `δ ∈ (0, 1)` and `m ≥ m₀/δ²`.
fn delta_rate(inp: &BoundInputs) -> Result<f64> {
    let d = inp.delta;
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {d}")));
    }
    if let Some(r) = inp.rho {
        return BoundInputs { rho: Some(r), ..*inp }.rate();
    }
    let needed = inp.m0 / (d * d);
    if inp.m < needed {
        return Err(Error::Config(format!(
            "need m >= m0/delta^2 = {needed}, got m = {}",
            inp.m
        )));
    }
    let rho = (inp.m0 / inp.m).sqrt() / d;
    if rho >= 1.0 {
        return Err(Error::SampleBudget { rho });
    }
    Ok(rho)
}

/// Least squares with the accuracy parameter `δ`, `η ≤ f(x*)`.
pub fn bound_cls_delta_case1(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    inp.case1()?;
    let rho = delta_rate(inp)?;
    let mismatch = 2f64.sqrt() * (1.0 + inp.delta) / (1.0 - rho) * inp.proj_gap;
    let noise = cls_noise_coefficient(rho) * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case1FGeEta, "cls_delta", cls_confidence(inp.u)))
}

/// Least squares with the accuracy parameter `δ`, `η > f(x*)`.
pub fn bound_cls_delta_case2(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    let ratio = inp.case2()?;
    let rho = delta_rate(inp)?;
    let q = (1.0 - rho).powi(2);
    let mismatch = (4.0 * rho * (1.0 + inp.delta) / q + 1.0) * ratio * inp.norm_x_star;
    let noise = 4.0 * rho / q * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case2FLtEta, "cls_delta", cls_confidence(inp.u)))
}

/// LAD rate `ρ = γ√(m₁/m)` after the conditions `γ ≥ 4`, `β > (5γ/4)²`,
/// `m > β m₁`; returns `(ρ, √(2/π) − ρ − u)`.
fn lad_rate(inp: &BoundInputs) -> Result<(f64, f64)> {
    let rho = if inp.rho.is_some() {
        inp.rate()?
    } else {
        if !(inp.gamma >= 4.0) {
            return Err(Error::Domain(format!("gamma must be >= 4, got {}", inp.gamma)));
        }
        let beta_min = (1.25 * inp.gamma).powi(2);
        if !(inp.beta > beta_min) {
            return Err(Error::Domain(format!(
                "beta must exceed (5 gamma/4)^2 = {beta_min}, got {}",
                inp.beta
            )));
        }
        if !(inp.m > inp.beta * inp.m1) {
            return Err(Error::Config(format!(
                "need m > beta m1 = {}, got m = {}",
                inp.beta * inp.m1,
                inp.m
            )));
        }
        inp.gamma * (inp.m1 / inp.m).sqrt()
    };
    let margin = sqrt_2_over_pi() - rho - inp.u;
    if !(inp.u >= 0.0) || !(margin > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 <= u < sqrt(2/pi) - rho = {}, got u = {}",
            sqrt_2_over_pi() - rho,
            inp.u
        )));
    }
    Ok((rho, margin))
}

fn lad_confidence(inp: &BoundInputs) -> f64 {
    1.0 - 6.0 * (-inp.m * inp.u * inp.u / 2.0).exp()
}

/// Least absolute deviation, `η ≤ f(x*)`.
pub fn bound_clad_case1(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    inp.case1()?;
    let (rho, margin) = lad_rate(inp)?;
    let mismatch = (sqrt_2_over_pi() + rho + inp.u) / margin * inp.proj_gap;
    let noise = 2.0 / margin * inp.noise_l1 / inp.m;
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case1FGeEta, "clad", lad_confidence(inp)))
}

/// Least absolute deviation, `η > f(x*)`.
pub fn bound_clad_case2(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    let ratio = inp.case2()?;
    let (rho, margin) = lad_rate(inp)?;
    let mismatch = (3.0 * sqrt_2_over_pi() + rho + inp.u) / margin * ratio * inp.norm_x_star;
    let noise = 2.0 / margin * inp.noise_l1 / inp.m;
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case2FLtEta, "clad", lad_confidence(inp)))
}

/// LAD under sparse corruption with `η ≤ ‖x*‖₁`:
/// `C/(ε − 1/α) · (‖e₂‖₁/m + (√(1/(2π)) + ε/2)·gap) + (‖x*‖₁ − η)/(α√s)`,
/// where `noise_l1` holds the dense part `‖e₂‖₁` and `f_star` holds `‖x*‖₁`.
pub fn bound_clad_corruption(inp: &BoundInputs, s: usize) -> Result<f64> {
    inp.validate()?;
    let (eps, alpha) = (inp.epsilon, inp.alpha);
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    if !(alpha >= 2.0 / eps) {
        return Err(Error::Domain(format!("alpha must be >= 2/epsilon = {}, got {alpha}", 2.0 / eps)));
    }
    if !(inp.corruption_fraction >= 0.0 && inp.corruption_fraction < BETA0 - eps) {
        return Err(Error::Domain(format!(
            "corruption fraction must lie in [0, {}), got {}",
            BETA0 - eps,
            inp.corruption_fraction
        )));
    }
    if s == 0 {
        return Err(Error::Validation("sparsity must be >= 1".into()));
    }
    if inp.eta > inp.f_star {
        return Err(Error::Validation(format!(
            "needs eta <= |x*|_1, got eta = {}, |x*|_1 = {}",
            inp.eta, inp.f_star
        )));
    }
    let head = inp.corruption_c / (eps - 1.0 / alpha)
        * (inp.noise_l1 / inp.m + ((1.0 / (2.0 * PI)).sqrt() + eps / 2.0) * inp.proj_gap);
    Ok(head + (inp.f_star - inp.eta) / (alpha * (s as f64).sqrt()))
}

fn cnls_confidence(inp: &BoundInputs) -> f64 {
    1.0 - 2.0 * (-inp.u * inp.u).exp() - 2.0 * (-V0 * V0 * inp.m / 8.0).exp()
}

/// Amplitude-based nonlinear least squares, `η ≤ f(x*)`. The error is the
/// sign-invariant distance.
pub fn bound_cnls_case1(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    inp.case1()?;
    let rho = inp.rate()?;
    let mismatch = (4.0 * rho / V0 + 4.0 / V0 + 1.0) * inp.proj_gap;
    let noise = 4.0 / V0 * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case1FGeEta, "cnls", cnls_confidence(inp)))
}

/// Amplitude-based nonlinear least squares, `η > f(x*)`.
pub fn bound_cnls_case2(inp: &BoundInputs) -> Result<BoundReport> {
    inp.validate()?;
    let ratio = inp.case2()?;
    let rho = inp.rate()?;
    let v2 = V0 * V0;
    let mismatch = (24.0 * rho / v2 + 3.0 / V0 + 1.0) * ratio * inp.norm_x_star;
    let noise = (16.0 * rho / v2 + 2.0 / V0) * inp.noise_per_sqrt_m();
    Ok(BoundReport::new(mismatch, noise, rho, CaseTag::Case2FLtEta, "cnls", cnls_confidence(inp)))
}

/// Relative distance from a feasibility boundary treated as on it.
const BOUNDARY_RTOL: f64 = 1e-12;

/// Samples needed by LAD to reach relative accuracy `ε` under a relative
/// mismatch: `m₀ (mis + ε)² / (C₂ε − C₁ mis)²` with `C₁ = 3√(2/π) + u`,
/// `C₂ = √(2/π) − u`.
pub fn tradeoff_samples_lad(mismatch: f64, epsilon: f64, u: f64, m0: f64) -> Result<f64> {
    let c1 = 3.0 * sqrt_2_over_pi() + u;
    let c2 = sqrt_2_over_pi() - u;
    let gap = c2 * epsilon - c1 * mismatch;
    if !(gap > BOUNDARY_RTOL * (c2 * epsilon).abs()) {
        return Err(Error::Infeasible(format!(
            "need C2 eps > C1 mismatch, got {} <= {}",
            c2 * epsilon,
            c1 * mismatch
        )));
    }
    Ok(m0 * (mismatch + epsilon).powi(2) / (gap * gap))
}

/// Samples needed for phase retrieval: `m₀·16 mis² / (ε v₀ − (4 + v₀) mis)²`.
pub fn tradeoff_samples_pr(mismatch: f64, epsilon: f64, m0: f64) -> Result<f64> {
    let gap = epsilon * V0 - (4.0 + V0) * mismatch;
    if !(gap > BOUNDARY_RTOL * (epsilon * V0).abs()) {
        return Err(Error::Infeasible(format!(
            "need eps v0 > (4 + v0) mismatch, got {} <= {}",
            epsilon * V0,
            (4.0 + V0) * mismatch
        )));
    }
    Ok(m0 * 16.0 * mismatch * mismatch / (gap * gap))
}

/// Constants for the specialized sparse least-squares rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LassoCalibration {
    /// Requires `m ≥ sample_c · s log n`.
    pub sample_c: f64,
    /// Leading constant of the rate.
    pub c: f64,
}

impl Default for LassoCalibration {
    fn default() -> Self {
        LassoCalibration { sample_c: 1.0, c: 10.0 }
    }
}

/// `C √(s log n / m) · ‖e‖₂/√m` for `s`-sparse signals at optimal tuning.
pub fn bound_lasso_specialized(
    s: usize,
    n: usize,
    m: usize,
    noise_l2: f64,
    cal: &LassoCalibration,
) -> Result<f64> {
    if s == 0 || s > n {
        return Err(Error::Domain(format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    if !(noise_l2 >= 0.0) {
        return Err(Error::Validation(format!("noise_l2 must be >= 0, got {noise_l2}")));
    }
    let slogn = s as f64 * (n as f64).ln();
    if (m as f64) < cal.sample_c * slogn {
        return Err(Error::Config(format!(
            "need m >= {} s log n = {:.2}, got m = {m}",
            cal.sample_c,
            cal.sample_c * slogn
        )));
    }
    let m = m as f64;
    Ok(cal.c * (slogn / m).sqrt() * noise_l2 / m.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_rho(rho: f64) -> BoundInputs {
        BoundInputs {
            rho: Some(rho),
            m: 100.0,
            ..Default::default()
        }
    }

    #[test]
    fn v0_constant() {
        assert!((v0() - V0).abs() < 1e-17);
        assert!((V0 - 0.0124).abs() < 5e-4);
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rho_rate(25.0, 100.0, 1.0).unwrap(), 0.5);
        assert!(matches!(rho_rate(100.0, 100.0, 1.0), Err(Error::SampleBudget { .. })));
        assert!((rho_rate(24.0, 2400.0, 2.0).unwrap() - 0.2).abs() < 1e-15);
        assert!(rho_rate(1.0, 100.0, 0.5).is_err());
    }

    #[test]
    fn cls_examples() {
        let r = bound_cls_case1(&with_rho(0.5)).unwrap();
        assert_eq!(r.value, 0.0);
        let r = bound_cls_case1(&BoundInputs { proj_gap: 1.0, ..with_rho(0.5) }).unwrap();
        assert!((r.value - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        let r = bound_cls_case1(&BoundInputs { noise_l2: 10.0, ..with_rho(0.5) }).unwrap();
        assert!((r.value - (4.0 * 2f64.sqrt() / 3.0 + 8.0)).abs() < 1e-12);
        assert!((r.value - 9.886).abs() < 1e-3);
        assert_eq!(r.mismatch_term, 0.0);

        let c2 = BoundInputs {
            eta: 1.1,
            f_star: 1.0,
            norm_x_star: 10.0,
            ..with_rho(0.5)
        };
        let r = bound_cls_case2(&c2).unwrap();
        assert!((r.value - 13.0).abs() < 1e-12);
        assert_eq!(r.case_tag, CaseTag::Case2FLtEta);
        let r = bound_cls_case2(&BoundInputs { eta: 1.0, ..c2 }).unwrap();
        assert_eq!(r.mismatch_term, 0.0);
        assert_eq!(
            bound_cls_case2(&BoundInputs { kind: StructureKind::L0, ..c2 }),
            Err(Error::UnsupportedKind(StructureKind::L0))
        );
        assert!(bound_cls_case2(&BoundInputs { f_star: 0.0, ..c2 }).is_err());
        assert!(matches!(bound_cls_case1(&with_rho(1.0)), Err(Error::SampleBudget { .. })));
    }

    #[test]
    fn cls_delta_examples() {
        let r = bound_cls_delta_case1(&BoundInputs {
            delta: 1e-9,
            proj_gap: 1.0,
            ..with_rho(0.5)
        })
        .unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-8);
        let err = bound_cls_delta_case1(&BoundInputs {
            delta: 0.5,
            m0: 25.0,
            m: 99.0,
            ..Default::default()
        });
        assert!(matches!(err, Err(Error::Config(_))));
        let r = bound_cls_delta_case2(&BoundInputs {
            delta: 0.5,
            eta: 2.0,
            ..with_rho(0.25)
        })
        .unwrap();
        assert!((r.mismatch_term - (4.0 * 0.25 * 1.5 / 0.5625 + 1.0)).abs() < 1e-12);
        assert!((r.mismatch_term - 3.6667).abs() < 1e-4);
        assert!(bound_cls_delta_case1(&BoundInputs { delta: 1.0, ..with_rho(0.5) }).is_err());
    }

    #[test]
    fn clad_examples() {
        let base = BoundInputs {
            u: 0.0,
            m1: 0.0,
            m: 100.0,
            proj_gap: 1.0,
            ..Default::default()
        };
        assert!((bound_clad_case1(&base).unwrap().value - 1.0).abs() < 1e-15);

        // ρ = 4 √(m1/m) = 0.2
        let r02 = BoundInputs {
            u: 0.1,
            m1: 1.0,
            m: 400.0,
            ..base
        };
        let r = bound_clad_case1(&r02).unwrap();
        assert!((r.rho - 0.2).abs() < 1e-15);
        let s = sqrt_2_over_pi();
        assert!((r.value - (s + 0.3) / (s - 0.3)).abs() < 1e-12);
        assert!((r.value - 2.2046).abs() < 1e-3);

        let r = bound_clad_case2(&BoundInputs {
            proj_gap: 0.0,
            eta: 1.1,
            ..r02
        })
        .unwrap();
        assert!((r.value - 0.54102).abs() < 1e-4, "{}", r.value);
        assert!(bound_clad_case2(&BoundInputs { noise_l1: -1.0, eta: 1.1, ..r02 }).is_err());
        assert_eq!(bound_clad_case2(&BoundInputs { eta: 1.0, ..r02 }).unwrap().mismatch_term, 0.0);

        assert!(matches!(
            bound_clad_case1(&BoundInputs { u: s - 0.2, ..r02 }),
            Err(Error::Domain(_))
        ));
        assert!(matches!(bound_clad_case1(&BoundInputs { m: 26.0, ..r02 }), Err(Error::Config(_))));
        assert!(bound_clad_case1(&BoundInputs { gamma: 3.0, ..r02 }).is_err());
        assert!(bound_clad_case1(&BoundInputs { beta: 25.0, ..r02 }).is_err());
    }

    #[test]
    fn corruption_examples() {
        let base = BoundInputs {
            m: 100.0,
            f_star: 3.0,
            eta: 3.0,
            epsilon: 0.2,
            alpha: 10.0,
            corruption_fraction: 0.03,
            ..Default::default()
        };
        assert_eq!(bound_clad_corruption(&base, 4).unwrap(), 0.0);
        // Only the last term survives: (|x*|_1 − η)/(α√s) = 1/(10·2).
        let v = bound_clad_corruption(&BoundInputs { eta: 2.0, ..base }, 4).unwrap();
        assert!((v - 1.0 / 20.0).abs() < 1e-15);
        assert!(bound_clad_corruption(&BoundInputs { alpha: 9.9, ..base }, 4).is_err());
        assert!(bound_clad_corruption(&BoundInputs { corruption_fraction: 0.039, ..base }, 4).is_err());
        assert!(bound_clad_corruption(&BoundInputs { corruption_fraction: 0.25, epsilon: 0.01, alpha: 200.0, ..base }, 4).is_err());
    }

    #[test]
    fn cnls_examples() {
        let r = bound_cnls_case1(&BoundInputs { proj_gap: 1.0, ..with_rho(0.0) }).unwrap();
        assert!((r.value - (4.0 / V0 + 1.0)).abs() < 1e-9);
        assert!((r.value - 324.2).abs() < 0.1);
        let r = bound_cnls_case2(&BoundInputs { eta: 1.0, ..with_rho(0.3) }).unwrap();
        assert_eq!(r.mismatch_term, 0.0);
    }

    #[test]
    fn tradeoff_examples() {
        let s = sqrt_2_over_pi();
        assert!((tradeoff_samples_lad(0.0, 0.5, 0.1, 100.0).unwrap() - 100.0 / (s - 0.1).powi(2)).abs() < 1e-9);
        let v = tradeoff_samples_lad(0.05, 0.5, 0.1, 100.0).unwrap();
        assert!((v - 601.5).abs() / 601.5 < 1e-3, "{v}");
        let c1 = 3.0 * s + 0.1;
        let c2 = s - 0.1;
        assert!(matches!(
            tradeoff_samples_lad(c2 * 0.5 / c1, 0.5, 0.1, 100.0),
            Err(Error::Infeasible(_))
        ));
        assert_eq!(tradeoff_samples_pr(0.0, 1.0, 100.0).unwrap(), 0.0);
        let v = tradeoff_samples_pr(0.001, 1.0, 100.0).unwrap();
        assert!((v - 22.872731811931).abs() < 1e-6, "{v}");
        assert!(matches!(tradeoff_samples_pr(V0 / (4.0 + V0), 1.0, 100.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn lasso_examples() {
        let cal = LassoCalibration::default();
        assert_eq!(bound_lasso_specialized(5, 128, 500, 0.0, &cal).unwrap(), 0.0);
        let v = bound_lasso_specialized(5, 128, 500, 500f64.sqrt(), &cal).unwrap();
        assert!((v - 10.0 * (5.0 * 128f64.ln() / 500.0).sqrt()).abs() < 1e-12);
        assert!((v - 2.203).abs() < 1e-3);
        assert!(matches!(bound_lasso_specialized(5, 128, 20, 1.0, &cal), Err(Error::Config(_))));
    }

    #[test]
    fn delta_coefficient_cross_check() {
        // √2(1+δ) < 3√2/2 exactly when δ < 1/2.
        for d in [0.1, 0.3, 0.49, 0.51, 0.7, 0.9] {
            let lhs = 2f64.sqrt() * (1.0 + d);
            let rhs = 3.0 * 2f64.sqrt() / 2.0;
            assert_eq!(lhs < rhs, d < 0.5);
        }
    }
}
