use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quartic_core::inequality::{builtin_catalog, verify_all};
use quartic_core::oracle::{sphere_minimize, OracleConfig};
use quartic_core::scalar::{int, ratio};
use quartic_core::CyclicTernary;

fn sphere(c: &mut Criterion) {
    let t = CyclicTernary::new(int(1), int(-1), int(1), int(2), ratio(-1, 3)).embed();
    let mut group = c.benchmark_group("sphere_minimize");
    for grid in [20_000usize, 80_000] {
        for parallel in [false, true] {
            let cfg = OracleConfig {
                grid_points: Some(grid),
                parallel,
                ..OracleConfig::default()
            };
            let id = BenchmarkId::new(if parallel { "parallel" } else { "sequential" }, grid);
            group.bench_with_input(id, &cfg, |b, cfg| b.iter(|| sphere_minimize(black_box(&t), cfg).unwrap()));
        }
    }
    group.finish();
}

fn catalog(c: &mut Criterion) {
    let list = builtin_catalog();
    let mut group = c.benchmark_group("catalog");
    group.sample_size(10);
    for parallel in [false, true] {
        let cfg = OracleConfig {
            parallel,
            ..OracleConfig::default()
        };
        let name = if parallel { "parallel" } else { "sequential" };
        group.bench_function(name, |b| b.iter(|| verify_all(black_box(&list), &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, sphere, catalog);
criterion_main!(benches);
