//! Corner-based `V_{∞,δ}` against the dense volume baseline, on a single
//! worker and on the default pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mpcorner::experiments::bench_decomposition;
use mpcorner::representations::{scdr_sup, scdr_sup_volume_dense};
use mpcorner::{par, GridSpec, Phi, PhiKind};

const DELTA: f64 = 0.05;

fn scdr(c: &mut Criterion) {
    let decomp = bench_decomposition(500, 0);
    let grid = GridSpec::square2([0.0, 0.0], [1.3, 1.3], 50).unwrap();
    let mut group = c.benchmark_group("scdr_sup_500x50");
    group.sample_size(10);
    for workers in [1, 0] {
        let label = if workers == 1 { "1-thread" } else { "default-pool" };
        for kind in PhiKind::ALL {
            let phi = Phi::new(kind, DELTA).unwrap();
            group.bench_with_input(BenchmarkId::new(kind.tag(), label), &workers, |b, &w| {
                par::with_workers(w, || b.iter(|| scdr_sup(black_box(&decomp), phi, &grid).unwrap()))
            });
        }
        group.bench_with_input(BenchmarkId::new("dense_b", label), &workers, |b, &w| {
            par::with_workers(w, || b.iter(|| scdr_sup_volume_dense(black_box(&decomp), DELTA, 64, &grid).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, scdr);
criterion_main!(benches);
