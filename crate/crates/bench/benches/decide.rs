use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pfrep_bench::fixtures;
use pfrep_core::ef_game::{exhaustive_check, GameBudget};
use pfrep_core::representation::{brute_force_search, SearchOptions};
use pfrep_core::{build_theta, decide_complete_representability, DuplicatorStrategy};

fn theta(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta");
    for (name, alg) in fixtures() {
        group.bench_with_input(BenchmarkId::new("build", name), &alg, |b, alg| {
            b.iter(|| build_theta(black_box(alg)))
        });
        group.bench_with_input(BenchmarkId::new("decide", name), &alg, |b, alg| {
            b.iter(|| decide_complete_representability(black_box(alg)))
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let options = SearchOptions::default();
    for (name, alg) in fixtures() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &alg, |b, alg| {
            b.iter(|| brute_force_search(black_box(alg), &options))
        });
    }
    group.finish();
}

fn game(c: &mut Criterion) {
    let mut group = c.benchmark_group("ef_game");
    group.sample_size(10);
    for rounds in [[1, 1, 1], [2, 2, 2], [3, 3, 3]] {
        let label = format!("{}{}{}", rounds[0], rounds[1], rounds[2]);
        group.bench_function(BenchmarkId::new("exhaustive", label), |b| {
            b.iter(|| exhaustive_check(GameBudget::new(rounds, 2), &DuplicatorStrategy::SingleAtoms))
        });
    }
    group.finish();
}

criterion_group!(benches, theta, search, game);
criterion_main!(benches);
