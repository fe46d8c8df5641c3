use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nil2kit::exec::Exec;
use nil2kit::oracle::fuzz::{fuzz_membership_with, FuzzConfig};
use nil2kit::oracle::unitary::search_unitary;

fn fuzz(c: &mut Criterion) {
    let cfg = FuzzConfig { seed: 1, trials: 16, max_dim: 6, entry_bound: 3 };
    let mut g = c.benchmark_group("fuzz_membership");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| fuzz_membership_with(&cfg, e).unwrap())
        });
    }
    g.finish();
}

fn unitary(c: &mut Criterion) {
    let mut g = c.benchmark_group("search_unitary_3x3");
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &e| {
            b.iter(|| search_unitary(3, 7, 2000, 0.05, e))
        });
    }
    g.finish();
}

criterion_group!(benches, fuzz, unitary);
criterion_main!(benches);
