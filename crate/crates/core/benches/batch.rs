use criterion::{criterion_group, criterion_main, Criterion};
use pvflow::harness::batch::{map, map_sequential};
use pvflow::harness::{generate, GenParams, Instance, Regime};
use pvflow::solver::solve_bounded;
use std::hint::black_box;

fn instances() -> Vec<Instance> {
    (0..32u64)
        .map(|seed| {
            let p = GenParams {
                n: 30 + seed as usize % 31,
                k: 2 + seed as usize % 5,
                u: 8,
                regime: Regime::Integer,
                ..GenParams::default()
            };
            generate(seed, &p).unwrap()
        })
        .collect()
}

fn solve(inst: &Instance) -> pvflow::Q {
    solve_bounded(&inst.network).unwrap().0.value
}

fn bench(c: &mut Criterion) {
    let batch = instances();
    let mut group = c.benchmark_group("bounded_batch_32");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| map(black_box(&batch), solve)));
    group.bench_function("sequential", |b| {
        b.iter(|| map_sequential(black_box(&batch), solve))
    });
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
