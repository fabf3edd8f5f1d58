use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cadsel::exec::ExecMode;
use cadsel::harness::{gen_dataset, label_case_a, label_case_b, GenSpec, LimitsSpec};

fn labeling(c: &mut Criterion) {
    let data = gen_dataset(&GenSpec::new(12, vec![2], 7)).unwrap();
    let limits = LimitsSpec::default();
    let mut group = c.benchmark_group("labeling");
    group.sample_size(10);
    for (name, mode) in [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)] {
        group.bench_with_input(BenchmarkId::new("case_a", name), &mode, |b, &m| {
            b.iter(|| label_case_a(&data.problems, &limits, m))
        });
        group.bench_with_input(BenchmarkId::new("case_b", name), &mode, |b, &m| {
            b.iter(|| label_case_b(&data.problems, &limits, m))
        });
    }
    group.finish();
}

criterion_group!(benches, labeling);
criterion_main!(benches);
