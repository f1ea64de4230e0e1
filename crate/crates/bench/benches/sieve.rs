//! Sieve construction and prime-iteration benchmarks.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pairsieve_core::factor::FactorSegment;
use pairsieve_core::sieve::PrimeTable;

fn bench_table_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("prime_table_build");
    group.sample_size(10);
    for limit in [1_000_000u64, 10_000_000, 100_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(limit), &limit, |b, &limit| {
            b.iter(|| PrimeTable::build(black_box(limit)).unwrap());
        });
    }
    group.finish();
}

fn bench_prime_iteration(c: &mut Criterion) {
    let table = PrimeTable::build(10_000_000).unwrap();
    c.bench_function("iterate_primes_1e7", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for p in table.primes() {
                acc = acc.wrapping_add(p);
            }
            black_box(acc)
        });
    });
    c.bench_function("prime_count_queries", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for x in (1_000..10_000_000u64).step_by(99_991) {
                acc += table.prime_count(black_box(x)).unwrap();
            }
            black_box(acc)
        });
    });
}

fn bench_factor_segment(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor_segment");
    group.sample_size(20);
    group.bench_function("window_1e6_len_1e5", |b| {
        b.iter(|| FactorSegment::build(black_box(1_000_000), black_box(1_100_000)).unwrap());
    });
    group.finish();
}

criterion_group!(benches, bench_table_build, bench_prime_iteration, bench_factor_segment);
criterion_main!(benches);
