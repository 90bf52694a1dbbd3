use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigUint;

use bdd_census::bdd::TruthTable;
use bdd_census::{oracle, unranking, Counter};
use bdd_census_bench::{warm_counter, Tables};

fn bench_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("counting");
    group.sample_size(20);
    group.bench_function("distribution k=4 (cold memo)", |b| {
        b.iter(|| {
            let counter = Counter::new();
            black_box(counter.size_distribution(black_box(4)).unwrap().total())
        })
    });
    group.bench_function("distribution k=6 (cold memo)", |b| {
        b.iter(|| {
            let counter = Counter::new();
            black_box(counter.size_distribution(black_box(6)).unwrap().total())
        })
    });
    let warm = warm_counter(6);
    group.bench_function("num_bdds (26,6) (warm memo)", |b| {
        b.iter(|| black_box(warm.num_bdds(black_box(26), black_box(6)).unwrap()))
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    group.bench_function("exhaustive census k=3", |b| {
        b.iter(|| black_box(oracle::oracle_distribution(black_box(3)).unwrap()))
    });
    let mut tables = Tables::new(1);
    group.bench_function("compact one 6-var table", |b| {
        b.iter(|| {
            let t = TruthTable::from_code(6, tables.next_code());
            black_box(oracle::compact_truth_table(&t))
        })
    });
    group.finish();
}

fn bench_generation(c: &mut Criterion) {
    let counter = warm_counter(6);
    let mut group = c.benchmark_group("generation");
    let mid = counter.num_bdds(11, 4).unwrap() / BigUint::from(2u32);
    group.bench_function("unrank mid-rank (11,4)", |b| {
        b.iter(|| black_box(unranking::unrank(&counter, 11, 4, &mid).unwrap()))
    });
    let probe = unranking::unrank(&counter, 26, 6, &BigUint::from(123_456u32)).unwrap();
    group.bench_function("rank (26,6)", |b| {
        b.iter(|| black_box(unranking::rank(&counter, &probe).unwrap()))
    });
    let mut sampler = unranking::Sampler::new(&counter, 99);
    group.bench_function("sample (26,6)", |b| {
        b.iter(|| black_box(sampler.sample(26, 6).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_counting, bench_oracle, bench_generation);
criterion_main!(benches);
