use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyberg::{gamma_sequence, SymbolSpec};
use std::hint::black_box;

fn sequences(c: &mut Criterion) {
    let poly = SymbolSpec::poly_t(&[0.3, -1.1, 0.7, 0.2]).unwrap();
    let ind = SymbolSpec::indicator(0.5).unwrap();
    let mut group = c.benchmark_group("gamma_sequence");
    for n in [2usize, 4, 8] {
        group.bench_with_input(BenchmarkId::new("poly_t", n), &n, |b, &n| {
            b.iter(|| gamma_sequence(black_box(&poly), n, 1.0, 32).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("indicator", n), &n, |b, &n| {
            b.iter(|| gamma_sequence(black_box(&ind), n, 1.0, 32).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sequences);
criterion_main!(benches);
