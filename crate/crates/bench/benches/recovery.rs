use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use strucrec_core::constraints::{hard_threshold, project_l1_ball, project_l2_ball};
use strucrec_core::geometry::{descent_cone_width, gaussian_width_mc, WidthSet};
use strucrec_core::harness::gen_ground_truth;
use strucrec_core::measurement::{gaussian_matrix, measure_linear, measure_magnitude};
use strucrec_core::rng::gaussian_vector;
use strucrec_core::solvers::{solve_clad, solve_cls, solve_cnls};
use strucrec_core::{FeasibleSet, RngSpec, SolverOptions, StructureKind};

fn projections(c: &mut Criterion) {
    let mut g = c.benchmark_group("projection");
    for n in [128usize, 1024, 8192] {
        let x = gaussian_vector(n, &RngSpec::new(1, n as u64)).unwrap();
        g.bench_with_input(BenchmarkId::new("l1", n), &x, |b, x| b.iter(|| project_l1_ball(black_box(x), 5.0)));
        g.bench_with_input(BenchmarkId::new("l2", n), &x, |b, x| b.iter(|| project_l2_ball(black_box(x), 1.0)));
        g.bench_with_input(BenchmarkId::new("hard_threshold", n), &x, |b, x| {
            b.iter(|| hard_threshold(black_box(x), 10))
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let (n, s, m) = (128, 5, 200);
    let rng = RngSpec::new(2, 0);
    let x = gen_ground_truth(n, s, &rng.substream(1)).unwrap();
    let a = gaussian_matrix(m, n, &rng.substream(2)).unwrap();
    let lin = measure_linear(a.clone(), &x, &vec![0.0; m]).unwrap();
    let mag = measure_magnitude(a, &x, &vec![0.0; m]).unwrap();
    let k = FeasibleSet::new(StructureKind::L1, x.norm_l1()).unwrap();
    let opts = SolverOptions { max_iters: 500, ..Default::default() };

    let mut g = c.benchmark_group("solver_n128_m200");
    g.sample_size(20);
    g.bench_function("cls", |b| b.iter(|| solve_cls(lin.matrix(), lin.y(), &k, &opts)));
    g.bench_function("clad", |b| b.iter(|| solve_clad(lin.matrix(), lin.y(), &k, &opts)));
    g.bench_function("cnls", |b| b.iter(|| solve_cnls(mag.matrix(), mag.y(), &k, &opts)));
    g.finish();
}

fn widths(c: &mut Criterion) {
    let mut g = c.benchmark_group("width_2000_samples");
    g.sample_size(10);
    let rng = RngSpec::new(3, 0);
    g.bench_function("l1_cap", |b| {
        b.iter(|| gaussian_width_mc(&WidthSet::L1Cap { s: 5, n: 128 }, 2000, &rng))
    });
    g.bench_function("descent_cone_l1", |b| {
        b.iter(|| descent_cone_width(StructureKind::L1, 128, 5, 2000, &rng))
    });
    g.finish();
}

criterion_group!(benches, projections, solvers, widths);
criterion_main!(benches);
