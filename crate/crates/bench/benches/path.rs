use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glars::selection::{grid_search_cv, SearchGrid, Validation};
use glars::{run_path, standardize, EstimatorKind, EstimatorSpec};
use glars_bench::simulated;

fn path_by_estimator(c: &mut Criterion) {
    let (train, _) = simulated(20, 0.9);
    let std = standardize(&train.x, &train.y).unwrap();
    let mut group = c.benchmark_group("run_path_50x20");
    for kind in EstimatorKind::ALL {
        let spec = EstimatorSpec::new(kind).with_shrinkage(0.5);
        group.bench_with_input(BenchmarkId::from_parameter(kind.algorithm_name()), &spec, |b, spec| {
            b.iter(|| run_path(black_box(&std), spec, 1.0).unwrap())
        });
    }
    group.finish();
}

fn path_by_width(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_path_olse_by_p");
    for m in [5, 10, 20, 40] {
        let (train, _) = simulated(m, 0.5);
        let std = standardize(&train.x, &train.y).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &std, |b, std| {
            b.iter(|| run_path(black_box(std), &EstimatorSpec::olse(), 1.0).unwrap())
        });
    }
    group.finish();
}

fn default_grid(c: &mut Criterion) {
    let (train, test) = simulated(20, 0.9);
    let spec = EstimatorSpec::new(EstimatorKind::Rd);
    let grid = SearchGrid::default_for(EstimatorKind::Rd);
    c.bench_function("grid_search_rd_default", |b| {
        b.iter(|| grid_search_cv(&train, Validation::Holdout(&test), &spec, &grid).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = path_by_estimator, path_by_width, default_grid
}
criterion_main!(benches);
