use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mquant_core::{
    make_family, make_target, oracle_min, quantize_id, quantize_vd, FamilyKind, FamilySpec,
};

fn yule_simon(c: &mut Criterion) {
    let spec = FamilySpec::new(FamilyKind::YuleSimon { rho: 0.2 });
    let mut group = c.benchmark_group("yule_simon");
    for m in [100u64, 1_000, 10_000] {
        let t = make_family(&spec, m).unwrap();
        group.bench_with_input(BenchmarkId::new("vd", m), &m, |b, &m| {
            b.iter(|| quantize_vd(black_box(&t), m))
        });
        group.bench_with_input(BenchmarkId::new("id", m), &m, |b, &m| {
            b.iter(|| quantize_id(black_box(&t), m))
        });
    }
    group.finish();
}

fn sweep_grid(c: &mut Criterion) {
    // a slice of the full 1..=10000 step-10 grid, target materialized per M
    let spec = FamilySpec::new(FamilyKind::YuleSimon { rho: 0.2 });
    c.bench_function("sweep_grid_slice", |b| {
        b.iter(|| {
            for m in (1..=2_000u64).step_by(100) {
                let t = make_family(&spec, m).unwrap();
                black_box(quantize_vd(&t, m).unwrap());
                black_box(quantize_id(&t, m).unwrap());
            }
        })
    });
}

fn oracle(c: &mut Criterion) {
    let t = make_target(&[0.4, 0.3, 0.2, 0.1, 0.05], true).unwrap();
    c.bench_function("oracle_n5_m10", |b| {
        b.iter(|| oracle_min(black_box(&t), 10, mquant_core::Criterion::Id))
    });
}

criterion_group!(benches, yule_simon, sweep_grid, oracle);
criterion_main!(benches);
