use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shotgun_bench::{gnp, relabeled, SEED};
use shotgun_core::diagnostics;
use shotgun_core::reconstruct::exact_assembly;
use shotgun_core::typicality::{self, AuditParams};
use shotgun_core::{canonical_code, extract_deck, DeckMode, Graph};

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_gnp");
    for n in [256, 1024, 4096] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| Graph::sample_gnp(n, 0.1, SEED).unwrap())
        });
    }
    group.finish();
}

fn canon(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_code");
    for n in [32, 128, 512] {
        let g = gnp(n, 0.3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| canonical_code(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn decks(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract_deck");
    group.sample_size(10);
    let g = gnp(256, 0.1);
    for mode in [DeckMode::Unlabeled, DeckMode::RootedLabeled] {
        group.bench_function(format!("{mode:?}"), |b| b.iter(|| extract_deck(black_box(&g), mode).unwrap()));
    }
    group.finish();
}

fn audits(c: &mut Criterion) {
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    let g = gnp(512, 0.1);
    let params = AuditParams::new(0.1, 8, SEED);
    group.bench_function("pair_codegree", |b| b.iter(|| typicality::audit_pair_codegree(&g, &params)));
    group.bench_function("triple_codegree", |b| b.iter(|| typicality::audit_triple_codegree(&g, &params)));
    group.bench_function("all", |b| b.iter(|| typicality::audit_all(&g, &params)));
    group.finish();
}

fn focus(c: &mut Criterion) {
    let mut group = c.benchmark_group("focused_pairs");
    group.sample_size(10);
    let (g, _, fam) = relabeled(200, 0.2);
    group.bench_function("n200", |b| b.iter(|| diagnostics::focused_pairs(&g, &fam, 0.2, 0.1, false)));
    group.finish();
}

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_assembly");
    for n in [8, 10, 12] {
        let deck = extract_deck(&gnp(n, 0.4), DeckMode::Unlabeled).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &deck, |b, d| {
            b.iter(|| exact_assembly(d, u64::MAX).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, canon, decks, audits, focus, assembly);
criterion_main!(benches);
