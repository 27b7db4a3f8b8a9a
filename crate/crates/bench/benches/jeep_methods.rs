//! Method 1 against Method 2 on equal subdivisions, the comparison behind
//! the runtime-ratio claim.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use transopt_core::jeep::{eval_equal_fast, method2_naive, subdivision_fuel, TransferMode};
use transopt_core::{JeepParams, Subdivision};

fn bench_methods(c: &mut Criterion) {
    let unit = JeepParams::new(1.0, 1.0).unwrap();
    let x = 10.0;
    let mut group = c.benchmark_group("jeep_x10");
    group.sample_size(10);
    for k in [1_000u64, 10_000, 100_000, 1_000_000] {
        let d = Subdivision::equal(x, k).unwrap();
        group.bench_with_input(BenchmarkId::new("method1", k), &d, |b, d| {
            b.iter(|| subdivision_fuel(black_box(d), &unit, 0.0, TransferMode::Faithful))
        });
        group.bench_with_input(BenchmarkId::new("method2_fast", k), &k, |b, &k| {
            b.iter(|| eval_equal_fast(black_box(x), k, &unit))
        });
        if k <= 100_000 {
            group.bench_with_input(BenchmarkId::new("method2_naive", k), &k, |b, &k| {
                b.iter(|| method2_naive(black_box(x), k, &unit))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_methods);
criterion_main!(benches);
