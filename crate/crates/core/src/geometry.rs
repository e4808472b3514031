//! Gaussian widths and the sample-complexity functionals built from them.
//!
//! `φ(t) = √2 Γ((t+1)/2) / Γ(t/2)` is the mean length of a standard Gaussian
//! vector in `R^t`; the phase-transition sample size is its inverse at
//! `ω + u`. Widths are estimated by Monte Carlo: every draw `g` gets its own
//! substream and the reduction runs in draw order, so estimates are
//! identical under any degree of parallelism.
//!
//! Descent-cone widths use `sup_{h ∈ C ∩ Bⁿ} ⟨g, h⟩ = ‖Π_C(g)‖₂`. This equals
//! the supremum over the cap `C ∩ S^{n-1}` whenever it is positive; the two
//! differ only on draws where `g` falls in the polar cone.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::constraints::{
    project_l1_in_place, project_l2_in_place, slice_value, FeasibleSet, StructureKind,
};
use crate::error::{Error, Result};
use crate::rng::{fill_standard_normal, RngSpec};
use crate::signal::{dot, norm_l2, SignalVector};

/// Minimum number of Monte Carlo draws accepted by the width estimators.
pub const MIN_WIDTH_SAMPLES: usize = 100;

/// Above this argument `φ` switches from log-gamma to its asymptotic series.
const PHI_SERIES_CUTOFF: f64 = 100.0;

/// `φ(t) = √2 Γ((t+1)/2) / Γ(t/2)`, defined for `t > 0`.
pub fn phi(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("phi needs t > 0, got {t}")));
    }
    if t < PHI_SERIES_CUTOFF {
        Ok(std::f64::consts::SQRT_2 * (ln_gamma((t + 1.0) / 2.0) - ln_gamma(t / 2.0)).exp())
    } else {
        // Γ(x+½)/Γ(x) = √x (1 − 1/(8x) + 1/(128x²) + 5/(1024x³) − 21/(32768x⁴) + …)
        // at x = t/2; the first omitted term is below 5e-11 relative here.
        let r = 1.0 / t;
        let series = 1.0 - r / 4.0 + r * r / 32.0 + 5.0 * r.powi(3) / 128.0
            - 21.0 * r.powi(4) / 2048.0;
        Ok(t.sqrt() * series)
    }
}

/// Checks `φ(m0)/√m0 ≤ φ(m)/√m` for `0 < m0 ≤ m`.
pub fn phi_ratio_monotone_check(m0: f64, m: f64) -> Result<bool> {
    if !(m0 > 0.0) {
        return Err(Error::Domain(format!("m0 must be positive, got {m0}")));
    }
    if m0 > m {
        return Err(Error::Domain(format!("need m0 <= m, got m0 = {m0}, m = {m}")));
    }
    Ok(phi(m0)? / m0.sqrt() <= phi(m)? / m.sqrt())
}

/// `(ω + u)²`, the closed-form approximation of [`sample_size_m0`].
pub fn sample_size_m0_approx(omega: f64, u: f64) -> f64 {
    (omega + u).powi(2)
}

/// `M(f, x, u) = φ⁻¹(ω + u)`, solved by bisection.
///
/// Since `t − ½ ≤ φ(t)² ≤ t` on the relevant range, the root lies in
/// `[(ω+u)², (ω+u)² + 1]`. Targets below `φ(1)` fall back to `(ω + u)²`.
pub fn sample_size_m0(omega: f64, u: f64) -> f64 {
    let target = omega + u;
    let approx = target * target;
    let phi1 = phi(1.0).expect("positive argument");
    if !(target >= phi1) {
        return approx;
    }
    let f = |t: f64| phi(t).expect("bracket stays positive") - target;
    let mut lo = approx;
    let mut hi = approx + 1.0;
    while f(hi) < 0.0 {
        hi += 1.0;
    }
    if f(lo) >= 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `M(f, x) = ω²`.
pub fn min_samples_m1(omega: f64) -> f64 {
    omega * omega
}

/// Analytic upper-bound surrogate `√(2 s log(n/s)) + 1.5 √s` for the width
/// of sparse caps. A bound, not the width itself.
pub fn width_bound_sparse(s: usize, n: usize) -> Result<f64> {
    if s == 0 || s > n {
        return Err(Error::Domain(format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    let (s, n) = (s as f64, n as f64);
    Ok((2.0 * s * (n / s).ln()).sqrt() + 1.5 * s.sqrt())
}

/// Anchor and feasible set defining a descent cone `C_f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub anchor: SignalVector,
    pub set: FeasibleSet,
}

impl ConeSpec {
    pub fn new(anchor: SignalVector, set: FeasibleSet) -> Self {
        ConeSpec { anchor, set }
    }

    /// `h ∈ D_f(x)`, i.e. `f(x + h) ≤ f(x)`, with a relative slack of 1e-12
    /// for rounding.
    pub fn is_descent(&self, h: &[f64]) -> bool {
        let x = self.anchor.as_slice();
        let kind = self.set.kind();
        let fx = slice_value(kind, x);
        let moved: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + b).collect();
        slice_value(kind, &moved) <= fx + 1e-12 * fx.max(1.0)
    }

    /// Whether the direction `h` lies in the cone: a short step along it
    /// is a descent step.
    pub fn is_cone_direction(&self, h: &[f64]) -> bool {
        let x = self.anchor.as_slice();
        let scale = x.iter().fold(0.0_f64, |m, v| {
            if *v != 0.0 {
                if m == 0.0 {
                    v.abs()
                } else {
                    m.min(v.abs())
                }
            } else {
                m
            }
        });
        let hn = norm_l2(h);
        if hn == 0.0 {
            return true;
        }
        let eps = if scale > 0.0 { 1e-3 * scale / hn } else { 1e-3 / hn };
        let step: Vec<f64> = h.iter().map(|v| eps * v).collect();
        self.is_descent(&step)
    }
}

/// Sets whose Gaussian width can be estimated.
#[derive(Debug, Clone, PartialEq)]
pub enum WidthSet {
    EuclideanBall { n: usize },
    Sphere { n: usize },
    /// `T₁ˢ = {‖x‖₁ ≤ √s, ‖x‖₂ ≤ 1}`.
    L1Cap { s: usize, n: usize },
    /// `C_f(x) ∩ S^{n-1}`.
    DescentConeCap(ConeSpec),
    /// A finite point set. With `symmetric`, the supremum is taken of
    /// `|⟨g, z⟩|`, i.e. over `T ∪ −T`.
    Finite {
        points: Vec<SignalVector>,
        symmetric: bool,
    },
}

impl WidthSet {
    pub fn dim(&self) -> Result<usize> {
        let n = match self {
            WidthSet::EuclideanBall { n } | WidthSet::Sphere { n } => *n,
            WidthSet::L1Cap { s, n } => {
                if *s == 0 || s > n {
                    return Err(Error::Domain(format!(
                        "l1 cap needs 1 <= s <= n, got s = {s}, n = {n}"
                    )));
                }
                *n
            }
            WidthSet::DescentConeCap(c) => c.anchor.len(),
            WidthSet::Finite { points, .. } => {
                let n = points
                    .first()
                    .ok_or_else(|| Error::Domain("empty point set".into()))?
                    .len();
                if let Some(p) = points.iter().find(|p| p.len() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: p.len(),
                    });
                }
                n
            }
        };
        if n == 0 {
            return Err(Error::InvalidDimension("width set needs n >= 1".into()));
        }
        Ok(n)
    }

    pub fn label(&self) -> String {
        match self {
            WidthSet::EuclideanBall { n } => format!("euclidean_ball(n={n})"),
            WidthSet::Sphere { n } => format!("sphere(n={n})"),
            WidthSet::L1Cap { s, n } => format!("l1_cap(s={s},n={n})"),
            WidthSet::DescentConeCap(c) => match c.set.kind() {
                StructureKind::L0 => format!(
                    "descent_cone_cap(l0,n={}) [heuristic lower-bias estimate]",
                    c.anchor.len()
                ),
                k => format!("descent_cone_cap({k},n={}) [exact inner maximum]", c.anchor.len()),
            },
            WidthSet::Finite { points, symmetric } => format!(
                "finite(points={},symmetric={symmetric})",
                points.len()
            ),
        }
    }
}

/// Tuning for the inner maximizations. Defaults are fixed for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthOptions {
    /// Projected-ascent iterations for the ℓ1 cap.
    pub ascent_iters: usize,
    /// Projected-ascent step for the ℓ1 cap.
    pub ascent_step: f64,
    /// Random support unions tried per draw for ℓ0 descent cones.
    pub l0_support_draws: usize,
}

impl Default for WidthOptions {
    fn default() -> Self {
        WidthOptions {
            ascent_iters: 200,
            ascent_step: 0.5,
            l0_support_draws: 16,
        }
    }
}

/// Monte Carlo estimate of a Gaussian width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: usize,
    pub set_label: String,
}

/// `ω(T) = E sup_{z∈T} ⟨g, z⟩` estimated from `samples` Gaussian draws.
pub fn gaussian_width_mc(set: &WidthSet, samples: usize, rng: &RngSpec) -> Result<WidthEstimate> {
    gaussian_width_mc_with(set, samples, rng, &WidthOptions::default())
}

pub fn gaussian_width_mc_with(
    set: &WidthSet,
    samples: usize,
    rng: &RngSpec,
    opts: &WidthOptions,
) -> Result<WidthEstimate> {
    if samples < MIN_WIDTH_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: samples,
            min: MIN_WIDTH_SAMPLES,
        });
    }
    let n = set.dim()?;
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.substream(i).rng();
            let mut g = vec![0.0; n];
            fill_standard_normal(&mut r, &mut g);
            support_value(set, &g, &mut r, opts)
        })
        .collect();
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(WidthEstimate {
        mean,
        stderr: (var / count).sqrt(),
        samples,
        set_label: set.label(),
    })
}

/// `sup_{z∈T} ⟨g, z⟩` for one draw.
fn support_value<R: Rng>(set: &WidthSet, g: &[f64], rng: &mut R, opts: &WidthOptions) -> f64 {
    match set {
        WidthSet::EuclideanBall { .. } | WidthSet::Sphere { .. } => norm_l2(g),
        WidthSet::L1Cap { s, .. } => l1_cap_ascent(g, (*s as f64).sqrt(), opts),
        WidthSet::DescentConeCap(cone) => match cone.set.kind() {
            StructureKind::L1 => l1_cone_projection(cone.anchor.as_slice(), g).1,
            StructureKind::L2 => l2_cone_projection(cone.anchor.as_slice(), g).1,
            StructureKind::L0 => l0_support_union_max(cone.anchor.as_slice(), g, rng, opts),
        },
        WidthSet::Finite { points, symmetric } => points
            .iter()
            .map(|p| {
                let v = dot(p.as_slice(), g);
                if *symmetric {
                    v.abs()
                } else {
                    v
                }
            })
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Projected gradient ascent of `⟨g, ·⟩` over `{‖z‖₁ ≤ r1, ‖z‖₂ ≤ 1}`.
/// Feasibility comes from projecting onto the ℓ1 ball and then the ℓ2 ball;
/// the radial ℓ2 step cannot increase the ℓ1 norm, so each iterate lies in
/// the intersection and the returned value never overshoots the supremum.
fn l1_cap_ascent(g: &[f64], r1: f64, opts: &WidthOptions) -> f64 {
    let mut z = vec![0.0; g.len()];
    for _ in 0..opts.ascent_iters {
        z.iter_mut()
            .zip(g)
            .for_each(|(zi, gi)| *zi += opts.ascent_step * gi);
        project_l1_in_place(&mut z, r1).expect("radius is positive");
        project_l2_in_place(&mut z, 1.0).expect("radius is positive");
    }
    dot(&z, g)
}

/// Projection of `g` onto the ℓ1 descent cone at `x` by Moreau
/// decomposition: subtract the nearest point of the polar cone
/// `{t z : t ≥ 0, z ∈ ∂‖x‖₁}`. Returns the projected direction and its norm,
/// which is the supremum of `⟨g, h⟩` over the cone cap.
pub(crate) fn l1_cone_projection(x: &[f64], g: &[f64]) -> (Vec<f64>, f64) {
    let on_support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    if on_support.is_empty() {
        // Descent set of ‖·‖₁ at the origin is {0}.
        return (vec![0.0; g.len()], 0.0);
    }
    let k = on_support.len() as f64;
    let a: f64 = on_support.iter().map(|&i| x[i].signum() * g[i]).sum();
    let mut off: Vec<f64> = (0..x.len())
        .filter(|&i| x[i] == 0.0)
        .map(|i| g[i].abs())
        .collect();
    off.sort_unstable_by(|p, q| q.total_cmp(p));

    // Root of the increasing map t ↦ k t − a − Σ (|g_i| − t)₊ over t ≥ 0.
    let derivative = |t: f64| k * t - a - off.iter().map(|v| (v - t).max(0.0)).sum::<f64>();
    let t = if derivative(0.0) >= 0.0 {
        0.0
    } else {
        let mut t = 0.0;
        let mut top = 0.0;
        for j in 0..=off.len() {
            let cand = (a + top) / (k + j as f64);
            let upper_ok = j == 0 || cand < off[j - 1];
            let lower_ok = j == off.len() || cand >= off[j];
            if upper_ok && lower_ok {
                t = cand;
                break;
            }
            if j < off.len() {
                top += off[j];
            }
        }
        t.max(0.0)
    };

    let h: Vec<f64> = (0..x.len())
        .map(|i| {
            if x[i] != 0.0 {
                g[i] - t * x[i].signum()
            } else {
                g[i].signum() * (g[i].abs() - t).max(0.0)
            }
        })
        .collect();
    let norm = norm_l2(&h);
    (h, norm)
}

/// Projection onto the half-space `{h : ⟨x, h⟩ ≤ 0}`, the ℓ2 descent cone.
pub(crate) fn l2_cone_projection(x: &[f64], g: &[f64]) -> (Vec<f64>, f64) {
    let xn = norm_l2(x);
    if xn == 0.0 {
        return (vec![0.0; g.len()], 0.0);
    }
    let c = dot(x, g) / xn;
    let h: Vec<f64> = if c > 0.0 {
        g.iter().zip(x).map(|(gi, xi)| gi - c * xi / xn).collect()
    } else {
        g.to_vec()
    };
    let norm = norm_l2(&h);
    (h, norm)
}

/// Heuristic for the non-convex ℓ0 descent set: the largest `‖g_U‖₂` over
/// random unions `U = supp(x) ∪ E` with `|E| = |supp(x)|`.
fn l0_support_union_max<R: Rng>(x: &[f64], g: &[f64], rng: &mut R, opts: &WidthOptions) -> f64 {
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    if support.is_empty() {
        return 0.0;
    }
    let rest: Vec<usize> = (0..x.len()).filter(|&i| x[i] == 0.0).collect();
    let base: f64 = support.iter().map(|&i| g[i] * g[i]).sum();
    let extra = support.len().min(rest.len());
    let mut best = base;
    for _ in 0..opts.l0_support_draws.max(1) {
        let picked = sample_indices(rng, rest.len(), extra);
        let add: f64 = picked.iter().map(|j| g[rest[j]] * g[rest[j]]).sum();
        best = best.max(base + add);
    }
    best.sqrt()
}

/// Width of the descent cone cap of `kind` at a canonical `support`-sparse
/// anchor in `R^n`. For ℓ1 and ℓ2 the width depends only on `(support, n)`,
/// so this value serves every anchor with that support size.
pub fn descent_cone_width(
    kind: StructureKind,
    n: usize,
    support: usize,
    samples: usize,
    rng: &RngSpec,
) -> Result<WidthEstimate> {
    if support == 0 || support > n {
        return Err(Error::Domain(format!(
            "anchor support must be in 1..=n, got {support} for n = {n}"
        )));
    }
    let mut anchor = vec![0.0; n];
    anchor[..support].iter_mut().for_each(|v| *v = 1.0);
    let eta = slice_value(kind, &anchor);
    let cone = ConeSpec::new(SignalVector::new(anchor)?, FeasibleSet::new(kind, eta)?);
    gaussian_width_mc(&WidthSet::DescentConeCap(cone), samples, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_exact_values() {
        let sqrt_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
        let sqrt_pi_over_2 = (std::f64::consts::PI / 2.0).sqrt();
        assert!((phi(1.0).unwrap() - sqrt_2_over_pi).abs() < 1e-12);
        assert!((phi(2.0).unwrap() - sqrt_pi_over_2).abs() < 1e-12);
        assert!((phi(1.0).unwrap() - 0.79788).abs() < 1e-5);
        assert!((phi(2.0).unwrap() - 1.25331).abs() < 1e-5);
    }

    #[test]
    fn phi_domain() {
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
        assert!(phi(f64::NAN).is_err());
    }

    #[test]
    fn phi_series_joins_log_gamma() {
        // Both routes agree where they meet.
        for t in [100.0_f64, 150.0, 400.0] {
            let lg = std::f64::consts::SQRT_2
                * (ln_gamma((t + 1.0) / 2.0) - ln_gamma(t / 2.0)).exp();
            let v = phi(t).unwrap();
            assert!((v - lg).abs() <= 1e-11 * lg, "t = {t}: {v} vs {lg}");
        }
    }

    #[test]
    fn phi_large_bracket() {
        let v = phi(10_000.0).unwrap();
        assert!(v >= (0.50245_f64 * 10_000.0).sqrt() && v <= 100.0);
    }

    #[test]
    fn ratio_check() {
        assert!(phi_ratio_monotone_check(1.0, 2.0).unwrap());
        assert!(phi_ratio_monotone_check(5.0, 5.0).unwrap());
        assert!(phi_ratio_monotone_check(3.0, 300.0).unwrap());
        assert!(phi_ratio_monotone_check(3.0, 2.0).is_err());
    }

    #[test]
    fn m0_examples() {
        assert_eq!(sample_size_m0_approx(3.0, 1.0), 16.0);
        let phi1 = phi(1.0).unwrap();
        assert!((sample_size_m0(0.0, phi1) - 1.0).abs() < 1e-6);
        // Below φ(1) the approximation is returned.
        assert_eq!(sample_size_m0(0.0, 0.5), 0.25);
    }

    #[test]
    fn m0_inverts_phi() {
        for (w, u) in [(3.0, 1.0), (5.5, 2.0), (20.0, 0.1), (0.5, 0.5)] {
            let t = sample_size_m0(w, u);
            assert!((phi(t).unwrap() - (w + u)).abs() < 1e-10);
            assert!(t >= sample_size_m0_approx(w, u) - 1.0);
            if w + u >= 2.0 {
                assert!((t - sample_size_m0_approx(w, u)).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn m1_and_sparse_bound() {
        assert_eq!(min_samples_m1(0.0), 0.0);
        assert_eq!(min_samples_m1(3.0), 9.0);
        let b12 = width_bound_sparse(1, 2).unwrap();
        assert!((b12 - ((2.0 * 2f64.ln()).sqrt() + 1.5)).abs() < 1e-12);
        assert!((b12 - 2.677).abs() < 1e-3);
        let b = width_bound_sparse(5, 128).unwrap();
        // √(10 ln 25.6) + 1.5 √5
        assert!((b - 9.0485).abs() < 1e-3, "{b}");
        assert!((min_samples_m1(b) - 81.876).abs() < 1e-2);
        assert!(width_bound_sparse(7, 7).unwrap() > 0.0);
        assert!(width_bound_sparse(0, 3).is_err());
        assert!(width_bound_sparse(4, 3).is_err());
    }

    #[test]
    fn width_rejects_few_samples() {
        assert_eq!(
            gaussian_width_mc(&WidthSet::Sphere { n: 3 }, 99, &RngSpec::default()),
            Err(Error::InsufficientSamples { got: 99, min: 100 })
        );
    }

    #[test]
    fn width_of_origin_is_zero() {
        let set = WidthSet::Finite {
            points: vec![SignalVector::zeros(5).unwrap()],
            symmetric: false,
        };
        let est = gaussian_width_mc(&set, 200, &RngSpec::new(3, 0)).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.stderr, 0.0);

        // Descent cone of ‖·‖₁ at the origin is the point {0}.
        let cone = ConeSpec::new(
            SignalVector::zeros(5).unwrap(),
            FeasibleSet::new(StructureKind::L1, 1.0).unwrap(),
        );
        let est = gaussian_width_mc(&WidthSet::DescentConeCap(cone), 200, &RngSpec::new(3, 0)).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn ball_width_near_phi() {
        for n in [2usize, 16, 100] {
            let est = gaussian_width_mc(&WidthSet::EuclideanBall { n }, 4000, &RngSpec::new(5, n as u64)).unwrap();
            let target = phi(n as f64).unwrap();
            assert!(
                (est.mean - target).abs() <= 4.0 * est.stderr,
                "n = {n}: {} ± {} vs {target}",
                est.mean,
                est.stderr
            );
        }
    }

    #[test]
    fn l1_cone_projection_is_feasible_and_optimal() {
        let x = [1.0, -2.0, 0.0, 0.0, 0.5, 0.0];
        let cone = ConeSpec::new(
            SignalVector::new(x.to_vec()).unwrap(),
            FeasibleSet::new(StructureKind::L1, 3.5).unwrap(),
        );
        let mut r = RngSpec::new(17, 0).rng();
        for _ in 0..200 {
            let mut g = vec![0.0; 6];
            fill_standard_normal(&mut r, &mut g);
            let (h, norm) = l1_cone_projection(&x, &g);
            assert!(cone.is_cone_direction(&h));
            // Moreau: g − h lies in the polar cone, so ⟨g − h, h⟩ = 0.
            let resid: Vec<f64> = g.iter().zip(&h).map(|(a, b)| a - b).collect();
            assert!(dot(&resid, &h).abs() < 1e-10);
            assert!((norm - norm_l2(&h)).abs() < 1e-15);
            // No random cone direction beats the projection.
            for _ in 0..50 {
                let mut d = vec![0.0; 6];
                fill_standard_normal(&mut r, &mut d);
                if cone.is_cone_direction(&d) {
                    let dn = norm_l2(&d);
                    assert!(dot(&d, &g) / dn <= norm + 1e-12);
                }
            }
        }
    }

    #[test]
    fn l2_cone_projection_halfspace() {
        let x = [3.0, 4.0];
        let (h, norm) = l2_cone_projection(&x, &[3.0, 4.0]);
        assert!(norm < 1e-12 && h.iter().all(|v| v.abs() < 1e-12));
        let (h, norm) = l2_cone_projection(&x, &[-3.0, -4.0]);
        assert_eq!(h, vec![-3.0, -4.0]);
        assert!((norm - 5.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_cone_width_is_deterministic() {
        let a = descent_cone_width(StructureKind::L1, 32, 3, 200, &RngSpec::new(1, 1)).unwrap();
        let b = descent_cone_width(StructureKind::L1, 32, 3, 200, &RngSpec::new(1, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a.mean > 0.0 && a.mean < phi(32.0).unwrap());
        assert!(a.set_label.contains("exact"));
        let l0 = descent_cone_width(StructureKind::L0, 32, 3, 200, &RngSpec::new(1, 1)).unwrap();
        assert!(l0.set_label.contains("heuristic"));
    }
}
