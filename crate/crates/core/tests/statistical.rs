//! Seeded Monte Carlo regressions. Seeds are fixed, so every assertion here
//! is deterministic; the thresholds carry the stated statistical slack.

use strucrec_core::geometry::{gaussian_width_mc, phi, WidthSet};
use strucrec_core::harness::gen_ground_truth;
use strucrec_core::measurement::{
    check_half_sample_lower, check_inner_product_bound, check_l1_concentration,
    check_two_sided_deviation, gaussian_matrix, make_noise, measure_linear, measure_magnitude,
    ProbeSet,
};
use strucrec_core::rng::gaussian_vector;
use strucrec_core::solvers::{relative_error, sign_invariant_error, solve_clad, solve_cls, solve_cnls};
use strucrec_core::{FeasibleSet, NoiseSpec, RngSpec, SolverOptions, StructureKind};

#[test]
fn gaussian_norm_mean_matches_phi() {
    for (i, n) in [2usize, 10, 100].into_iter().enumerate() {
        let draws = 10_000;
        let norms: Vec<f64> = (0..draws)
            .map(|d| gaussian_vector(n, &RngSpec::new(40 + i as u64, d)).unwrap().norm_l2())
            .collect();
        let mean = norms.iter().sum::<f64>() / draws as f64;
        let var = norms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        let target = phi(n as f64).unwrap();
        assert!((mean - target).abs() <= 4.0 * se, "n = {n}: {mean} vs {target} (se {se})");
    }
}

#[test]
fn ball_width_tracks_phi() {
    for n in [2usize, 16, 100] {
        let est = gaussian_width_mc(&WidthSet::EuclideanBall { n }, 10_000, &RngSpec::new(50, n as u64)).unwrap();
        let target = phi(n as f64).unwrap();
        assert!((est.mean - target).abs() <= 4.0 * est.stderr, "n = {n}: {est:?} vs {target}");
    }
}

#[test]
fn l1_cap_width_is_below_ball_and_sparse_rate() {
    let (s, n) = (5, 128);
    let rng = RngSpec::new(51, 0);
    let cap = gaussian_width_mc(&WidthSet::L1Cap { s, n }, 2000, &rng).unwrap();
    let ball = gaussian_width_mc(&WidthSet::EuclideanBall { n }, 2000, &rng).unwrap();
    let joint = (cap.stderr.powi(2) + ball.stderr.powi(2)).sqrt();
    assert!(cap.mean <= ball.mean + 4.0 * joint);
    assert!(cap.mean <= 2.0 * (s as f64 * (n as f64).ln()).sqrt(), "{cap:?}");
}

fn desk_probes(seed: u64) -> ProbeSet {
    // Sparse directions of the kind the error analysis feeds the lemmas:
    // differences of s-sparse vectors are 2s-sparse.
    let mut probes = ProbeSet::sparse_unit(128, 10, 20, &RngSpec::new(seed, 0)).unwrap();
    for t in 0..5 {
        probes.push(gen_ground_truth(128, 5, &RngSpec::new(seed, 100 + t)).unwrap()).unwrap();
    }
    probes
}

#[test]
fn lemma_checkers_pass_at_desk_scale() {
    let (m, trials) = (256, 500);
    let probes = desk_probes(60);
    let dev = check_two_sided_deviation(&probes, m, trials, 0.5, 2.0, &RngSpec::new(61, 0)).unwrap();
    assert!(dev.pass, "{dev:?}");
    let l1 = check_l1_concentration(&probes, m, trials, 0.1, &RngSpec::new(62, 0)).unwrap();
    assert!(l1.pass, "{l1:?}");
    let xbar = gen_ground_truth(128, 5, &RngSpec::new(63, 1)).unwrap();
    let half = check_half_sample_lower(&xbar, m, trials, &RngSpec::new(63, 0)).unwrap();
    assert!(half.pass, "{half:?}");
    let inner = check_inner_product_bound(&probes, m, trials, 2.0, &NoiseSpec::Gaussian { sigma: 1.0 }, &RngSpec::new(64, 0))
        .unwrap();
    assert!(inner.pass, "{inner:?}");
}

fn linear_trial(seed: u64, m: usize, noise: &NoiseSpec) -> (strucrec_core::SignalVector, strucrec_core::MeasurementSet) {
    let rng = RngSpec::new(seed, 0);
    let x = gen_ground_truth(128, 5, &rng.substream(1)).unwrap();
    let a = gaussian_matrix(m, 128, &rng.substream(2)).unwrap();
    let e = make_noise(noise, m, &rng.substream(3)).unwrap();
    let ms = measure_linear(a, &x, &e).unwrap();
    (x, ms)
}

#[test]
fn cls_recovers_at_optimal_tuning() {
    let mut ok = 0;
    for t in 0..100 {
        let (x, ms) = linear_trial(700 + t, 100, &NoiseSpec::None);
        let k = FeasibleSet::new(StructureKind::L1, x.norm_l1()).unwrap();
        let r = solve_cls(ms.matrix(), ms.y(), &k, &SolverOptions::default()).unwrap();
        ok += (relative_error(&r.x_hat, &x).unwrap() <= 1e-4) as usize;
    }
    assert!(ok >= 95, "{ok}/100");
}

#[test]
fn clad_survives_sparse_corruption() {
    let mut ok = 0;
    let trials = 40;
    for t in 0..trials {
        let rng = RngSpec::new(800 + t, 0);
        let x = gen_ground_truth(128, 5, &rng.substream(1)).unwrap();
        let xinf = x.as_slice().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let spec = NoiseSpec::SparseAdversarial { fraction: 0.1, magnitude: 100.0 * xinf };
        let a = gaussian_matrix(300, 128, &rng.substream(2)).unwrap();
        let e = make_noise(&spec, 300, &rng.substream(3)).unwrap();
        let ms = measure_linear(a, &x, &e).unwrap();
        let k = FeasibleSet::new(StructureKind::L1, x.norm_l1()).unwrap();
        let opts = SolverOptions { max_iters: 3000, ..Default::default() };
        let r = solve_clad(ms.matrix(), ms.y(), &k, &opts).unwrap();
        ok += (relative_error(&r.x_hat, &x).unwrap() <= 0.05) as usize;
    }
    assert!(ok * 10 >= trials as usize * 9, "{ok}/{trials}");
}

#[test]
fn cnls_recovers_from_spectral_start() {
    let m = 8 * (5.0 * 128f64.ln()).ceil() as usize;
    assert_eq!(m, 200);
    let mut ok = 0;
    for t in 0..100 {
        let rng = RngSpec::new(900 + t, 0);
        let x = gen_ground_truth(128, 5, &rng.substream(1)).unwrap();
        let a = gaussian_matrix(m, 128, &rng.substream(2)).unwrap();
        let ms = measure_magnitude(a, &x, &vec![0.0; m]).unwrap();
        let k = FeasibleSet::new(StructureKind::L1, x.norm_l1()).unwrap();
        let r = solve_cnls(ms.matrix(), ms.y(), &k, &SolverOptions::default()).unwrap();
        ok += (sign_invariant_error(&r.x_hat, &x).unwrap() <= 1e-3) as usize;
    }
    assert!(ok >= 80, "{ok}/100");
}
