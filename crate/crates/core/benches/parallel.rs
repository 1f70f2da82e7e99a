use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dimwitness::estimator::{run_estimator, EstimatorConfig};
use dimwitness::numerics::{haar_unitary, CVector, SeedStream};
use dimwitness::par::map_indexed;
use dimwitness::witness::{exact_sum_complex, Tolerances};
use dimwitness::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn estimator(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_estimator_d10_m100");
    group.sample_size(10);
    for (name, execution) in MODES {
        let config = EstimatorConfig {
            ensemble_size: 100,
            dimension: 10,
            master_seed: 1,
            execution,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, cfg| {
            b.iter(|| run_estimator(cfg).unwrap())
        });
    }
    group.finish();
}

fn oracle_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_sum_batch_d8_x256");
    group.sample_size(10);
    let z = CVector::basis(8, 0).unwrap();
    let unitaries: Vec<_> = (0..256).map(|i| haar_unitary(8, &SeedStream::new(2, i)).unwrap()).collect();
    for (name, execution) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                map_indexed(execution, unitaries.len(), |i| {
                    exact_sum_complex(&unitaries[i], &z, &Tolerances::default()).unwrap().exact_sum
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, estimator, oracle_batch);
criterion_main!(benches);
