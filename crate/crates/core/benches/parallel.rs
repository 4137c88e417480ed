use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use cubical::catalg::{cubical_nerve, square_poset};
use cubical::coeff::{constant_system, Variance};
use cubical::cubset::product;
use cubical::fixtures;
use cubical::homcalc::{fiber_criterion, homology};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("sequential", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn expand(c: &mut Criterion) {
    let mut group = c.benchmark_group("expand_torus_t5");
    let torus = fixtures::torus();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| torus.expand(5)))
        });
    }
    group.finish();
}

fn nerve(c: &mut Criterion) {
    let mut group = c.benchmark_group("nerve_square_t4");
    let sq = square_poset();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| cubical_nerve(&sq, 4).unwrap()))
        });
    }
    group.finish();
}

fn product_homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("homology_circle_x_interval");
    group.sample_size(10);
    let table = product(&fixtures::circle(), &fixtures::interval(), 4);
    let f = constant_system(&table, 1, Variance::Contravariant);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| homology(&f, 3).unwrap()))
        });
    }
    group.finish();
}

fn fibers(c: &mut Criterion) {
    let mut group = c.benchmark_group("fiber_criterion_fold_torus");
    group.sample_size(10);
    let map = fixtures::fold_map(&fixtures::torus());
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| fiber_criterion(&map, 1, 2).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, expand, nerve, product_homology, fibers);
criterion_main!(benches);
