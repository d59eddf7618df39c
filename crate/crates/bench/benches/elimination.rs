use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hermform_bench::random_sparse;

fn rank_and_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("elimination");
    group.sample_size(20);
    for size in [20, 40, 60] {
        let m = random_sparse(size, size, 0.15, size as u64);
        group.bench_with_input(BenchmarkId::new("rank", size), &m, |b, m| {
            b.iter(|| black_box(m.rank()))
        });
        group.bench_with_input(BenchmarkId::new("kernel", size), &m, |b, m| {
            b.iter(|| black_box(m.kernel()))
        });
    }
    group.finish();
}

criterion_group!(benches, rank_and_kernel);
criterion_main!(benches);
