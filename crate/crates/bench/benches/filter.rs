use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use grouptrack::filter::assignment::{ranked_assignments, CostMatrix};
use grouptrack::filter::{predict, update};
use grouptrack::metrics::{ospa, OspaParams};
use grouptrack::sim::{run_filter, run_trial, Realization, RunOptions};
use grouptrack::{Measurement, Mode, ScenarioConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn filter_step(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let realization = Realization::generate(&cfg, 1).unwrap();
    let options = RunOptions {
        record_states: true,
        record_hypotheses: 0,
    };
    let motion = cfg.motion_model();
    let birth = cfg.birth_model();
    let sensor = cfg.sensor_model();
    let params = cfg.filter_params();
    for mode in Mode::ALL {
        let run = run_filter(&cfg, &realization, mode, options).unwrap();
        // a converged posterior at step 50 and the next scan
        let posterior = run.states[49].clone();
        let z = &realization.measurements[50];
        c.bench_function(&format!("predict_update/{mode}"), |b| {
            b.iter(|| {
                let predicted = predict(&posterior, &motion, &birth, params.survival_probability, 51).unwrap();
                update(&predicted, black_box(z), &sensor, &params).unwrap()
            })
        });
    }
}

fn assignment(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<f64>> = (0..12).map(|_| (0..40).map(|_| rng.random_range(0.0..50.0)).collect()).collect();
    let cost = CostMatrix::from_rows(&rows);
    c.bench_function("ranked_assignments/12x40/k100", |b| b.iter(|| ranked_assignments(black_box(&cost), 100)));
}

fn ospa_distance(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pts = |n: usize| -> Vec<Measurement> {
        (0..n)
            .map(|_| Measurement::new(rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0)))
            .collect()
    };
    let (x, y) = (pts(6), pts(8));
    c.bench_function("ospa/6x8", |b| b.iter(|| ospa(black_box(&x), black_box(&y), OspaParams::default())));
}

fn short_trial(c: &mut Criterion) {
    let mut cfg = ScenarioConfig::default();
    cfg.scenario.steps = 30;
    let mut group = c.benchmark_group("trial");
    group.sample_size(10);
    for mode in Mode::ALL {
        group.bench_function(format!("30_steps/{mode}"), |b| {
            b.iter_batched(|| cfg.clone(), |cfg| run_trial(&cfg, 5, mode).unwrap(), BatchSize::SmallInput)
        });
    }
    group.finish();
}

criterion_group!(benches, filter_step, assignment, ospa_distance, short_trial);
criterion_main!(benches);
