use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use geodesic_bench::{complete, delaunay, labelled_moons, uniform_cloud};
use geodesic_core::geodesics::{alpha_transform, apsp_floyd, apsp_johnson, mst_backward, mst_forward};
use geodesic_core::graphs::{build_delaunay_2d, build_gabriel, TieMode};
use geodesic_core::selection::{knn_cv, KnnOptions};
use geodesic_core::Beta;

fn graphs(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for n in [100, 400] {
        let pc = uniform_cloud(n, 2, 1);
        g.bench_with_input(BenchmarkId::new("gabriel", n), &pc, |b, pc| {
            b.iter(|| build_gabriel(pc, TieMode::Lenient).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("delaunay", n), &pc, |b, pc| {
            b.iter(|| build_delaunay_2d(pc, TieMode::Lenient).unwrap())
        });
    }
    g.finish();
}

fn apsp(c: &mut Criterion) {
    let mut g = c.benchmark_group("apsp");
    g.sample_size(10);
    for n in [100, 300] {
        let dense = alpha_transform(&complete(n, 2), -1.0).unwrap();
        let sparse = alpha_transform(&delaunay(n, 2), -1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("floyd_complete", n), &dense, |b, ag| b.iter(|| apsp_floyd(ag)));
        g.bench_with_input(BenchmarkId::new("johnson_complete", n), &dense, |b, ag| {
            b.iter(|| apsp_johnson(ag).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("floyd_delaunay", n), &sparse, |b, ag| b.iter(|| apsp_floyd(ag)));
        g.bench_with_input(BenchmarkId::new("johnson_delaunay", n), &sparse, |b, ag| {
            b.iter(|| apsp_johnson(ag).unwrap())
        });
    }
    g.finish();
}

fn mst(c: &mut Criterion) {
    let g = complete(300, 3);
    c.bench_function("mst_forward_300", |b| b.iter(|| mst_forward(&g).unwrap()));
    c.bench_function("mst_backward_300", |b| b.iter(|| mst_backward(&g).unwrap()));
}

fn knn(c: &mut Criterion) {
    let pc = labelled_moons(120, 4);
    let opts = KnnOptions {
        n_repeats: 20,
        ..KnnOptions::default()
    };
    let betas = [Beta::new(0.25).unwrap(), Beta::INFINITE];
    let mut g = c.benchmark_group("knn");
    g.sample_size(10);
    g.bench_function("moons_120_x20", |b| b.iter(|| knn_cv(&pc, &[-2.0, -1.0, 0.0], &betas, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, graphs, apsp, mst, knn);
criterion_main!(benches);
