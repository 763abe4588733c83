use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liouville_core::certify::{ball_fuzz, lemma_sin};
use liouville_core::par::Exec;
use liouville_core::polyenum::enumerate_sk_with;
use liouville_core::rigor::Schedule;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sk_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_sk");
    g.sample_size(10);
    for (m, k) in [(2usize, 12u64), (3, 6)] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, format!("m{m}k{k}")), &(m, k), |b, &(m, k)| {
                b.iter(|| enumerate_sk_with(black_box(m), black_box(k), u128::MAX, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn sin_lemma(c: &mut Criterion) {
    let mut g = c.benchmark_group("lemma_sin");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| lemma_sin(black_box(2_000), 7, Schedule::default(), exec).unwrap()));
    }
    g.finish();
}

fn fuzz(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball_fuzz");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| ball_fuzz(black_box(2_000), 128, 7, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sk_enumeration, sin_lemma, fuzz);
criterion_main!(benches);
