use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gradnet_bench::fixture;
use gradnet_core::ga::{enumerate_paths, evolve};
use gradnet_core::grading::level1_select;
use gradnet_core::rng::seeded_rng;
use gradnet_core::topology::generate_topology;
use gradnet_core::{GaConfig, GradedSubgraph, GradingThresholds, Population};

const SIZES: [usize; 3] = [32, 128, 256];

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_topology");
    for n in SIZES {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| generate_topology(black_box(n), 4, 0.05, 7).unwrap())
        });
    }
    group.finish();
}

fn grading(c: &mut Criterion) {
    let mut group = c.benchmark_group("level1_select");
    let thresholds = GradingThresholds::default();
    for n in SIZES {
        let topo = fixture(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &topo, |b, t| {
            b.iter(|| level1_select(black_box(t), &thresholds).ok())
        });
    }
    group.finish();
}

fn routing(c: &mut Criterion) {
    let config = GaConfig::default();
    let mut enumerate = c.benchmark_group("enumerate_paths");
    for n in SIZES {
        let topo = fixture(n, 7);
        let sub = GradedSubgraph::full(&topo);
        enumerate.bench_with_input(BenchmarkId::from_parameter(n), &sub, |b, s| {
            b.iter(|| enumerate_paths(black_box(s), config.population_cap, usize::MAX).unwrap())
        });
    }
    enumerate.finish();

    let mut ga = c.benchmark_group("evolve");
    for n in SIZES {
        let topo = fixture(n, 7);
        let sub = GradedSubgraph::full(&topo);
        let paths = enumerate_paths(&sub, config.population_cap, usize::MAX).unwrap();
        ga.bench_with_input(BenchmarkId::from_parameter(n), &paths, |b, p| {
            b.iter(|| {
                let mut rng = seeded_rng(3);
                evolve(Population::new(p.clone()), &config, &topo, &sub, &mut rng).unwrap()
            })
        });
    }
    ga.finish();
}

criterion_group!(benches, generation, grading, routing);
criterion_main!(benches);
