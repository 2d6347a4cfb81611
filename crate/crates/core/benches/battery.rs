use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hpharm_core::battery::{run_battery, BatteryConfig};
use hpharm_core::par::Execution;

fn battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("battery");
    group.sample_size(10);
    for trials in [50u64, 400] {
        for (label, execution) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            let cfg = BatteryConfig {
                execution,
                ..BatteryConfig::new(42, trials)
            };
            group.bench_with_input(BenchmarkId::new(label, trials), &cfg, |b, cfg| {
                b.iter(|| run_battery(cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, battery);
criterion_main!(benches);
