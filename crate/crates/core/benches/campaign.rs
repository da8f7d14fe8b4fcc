use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gaugecheck_core::campaign::{run_trials, run_trials_sequential, CampaignConfig};

fn campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for trials in [8usize, 32] {
        let cfg = CampaignConfig { trials, ..CampaignConfig::default() };
        group.bench_with_input(BenchmarkId::new("sequential", trials), &cfg, |b, cfg| {
            b.iter(|| run_trials_sequential(cfg))
        });
        group.bench_with_input(BenchmarkId::new("parallel", trials), &cfg, |b, cfg| b.iter(|| run_trials(cfg)));
    }
    group.finish();
}

criterion_group!(benches, campaign);
criterion_main!(benches);
