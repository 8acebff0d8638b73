use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use smallcancel::{find_relator_subword, make_relator, reduce, verify_cprime, DehnSolver, Rational, Word};
use smallcancel_bench::{family, random_words, trivial_words};

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("words");
    for k in [2, 4, 6] {
        let r = make_relator(&(0..k as u32).collect::<Vec<_>>(), 80).unwrap();
        let w = Word::unreduced(r.concat(&r.inverse()).into_letters());
        g.bench_with_input(BenchmarkId::new("reduce_cancelling", k), &w, |b, w| b.iter(|| reduce(black_box(w))));
        g.bench_with_input(BenchmarkId::new("make_relator", k), &k, |b, &k| {
            let prefix: Vec<u32> = (0..k as u32).collect();
            b.iter(|| make_relator(black_box(&prefix), 80))
        });
    }
    g.finish();
}

fn certification(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_cprime");
    g.sample_size(10);
    for k in [3, 6] {
        g.bench_function(BenchmarkId::from_parameter(k), |b| {
            b.iter_batched(|| family(k), |f| verify_cprime(&f, Rational::new(1, 10)).unwrap(), BatchSize::LargeInput)
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let f = family(6);
    let cert = verify_cprime(&f, Rational::new(1, 10)).unwrap();
    let solver = DehnSolver::new(&f, &cert).unwrap();
    let trivial = trivial_words(&f, 16, 1);
    let random = random_words(16, 256, 2);

    let mut g = c.benchmark_group("search");
    g.bench_function("find_relator_subword/random", |b| {
        b.iter(|| random.iter().filter(|w| find_relator_subword(w, &f, Rational::new(1, 2)).is_some()).count())
    });
    g.bench_function("dehn_reduce/random", |b| b.iter(|| random.iter().map(|w| solver.dehn_reduce(w).final_word.len()).sum::<usize>()));
    g.sample_size(10);
    g.bench_function("dehn_reduce/trivial", |b| b.iter(|| trivial.iter().map(|w| solver.dehn_reduce(w).trace.len()).sum::<usize>()));
    g.bench_function("conjugacy_probe/5x2", |b| b.iter(|| solver.conjugacy_probe(5, 2).pass));
    g.finish();
}

criterion_group!(benches, words, certification, search);
criterion_main!(benches);
