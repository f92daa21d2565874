use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use walkmat::graph::{Graph, VertexSet};
use walkmat::oracle;
use walkmat::par;

fn sample(n: usize, count: usize) -> Vec<Graph> {
    (0..count).map(|t| oracle::random_graph(n, &mut oracle::trial_rng(11, t as u64))).collect()
}

fn rank_stats(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_statistics");
    group.sample_size(10);
    for n in [8usize, 10] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| oracle::rank_statistics(n, 200, 1))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| oracle::rank_statistics_seq(n, 200, 1, false))
        });
    }
    group.finish();
}

fn round_trip(c: &mut Criterion) {
    let mut group = c.benchmark_group("round_trip");
    group.sample_size(10);
    for n in [7usize, 9] {
        let graphs = sample(n, 100);
        let v = VertexSet::all(n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &graphs, |b, gs| {
            b.iter(|| par::map(gs, |g| oracle::roundtrip_one(g, &v).ok))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &graphs, |b, gs| {
            b.iter(|| par::map_seq(gs, |g| oracle::roundtrip_one(g, &v).ok))
        });
    }
    group.finish();
}

fn classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_classes");
    group.sample_size(10);
    group.bench_function("n6", |b| b.iter(|| oracle::graph_classes(6).unwrap().len()));
    group.finish();
}

criterion_group!(benches, rank_stats, round_trip, classes);
criterion_main!(benches);
