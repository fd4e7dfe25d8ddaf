//! Domination sweep throughput with the data-parallel core against the
//! sequential fallback. On a single-core machine the two should match.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kfib_core::functionals::ClassSpec;
use kfib_core::parallel::Execution;
use kfib_core::rational::int;
use kfib_core::verify::{domination_sweep, SweepConfig};
use kfib_core::KappaContext;

fn sweep(c: &mut Criterion) {
    let ctx = KappaContext::new(int(1)).expect("kappa = 1");
    let spec = ClassSpec::w(int(1), int(0), int(0)).expect("valid class");
    let mut group = c.benchmark_group("domination_sweep");
    group.sample_size(10);
    for exec in [Execution::Parallel, Execution::Sequential] {
        let cfg = SweepConfig { execution: exec, ..SweepConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &cfg, |b, cfg| {
            b.iter(|| domination_sweep(&ctx, &spec, cfg).expect("sweep runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
