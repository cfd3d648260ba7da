use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fuzzy_cocomo::{
    run_experiment, total_effort, CostDriverTable, DriverId, DriverRatings, ExperimentConfig,
    FuzzyEstimator, Mode, NominalFisConfig, ProjectRecord,
};

// 60 projects on the crisp surface with deterministic rating patterns.
fn projects() -> Vec<ProjectRecord> {
    let table = CostDriverTable::standard();
    (0..60)
        .map(|i| {
            let mode = Mode::ALL[i % 3];
            let kdsi = 1.5 + (i as f64 * 1.618).rem_euclid(95.0);
            let mut ratings = DriverRatings::nominal();
            for (k, id) in DriverId::ALL.into_iter().enumerate() {
                let levels: Vec<_> = table.get(id).levels().collect();
                ratings.set(id, levels[(i * 7 + k * 3) % levels.len()]);
            }
            let pm = total_effort(mode, kdsi, &ratings).unwrap() * (0.8 + 0.01 * (i % 40) as f64);
            ProjectRecord::new(format!("b{i}"), kdsi, mode, ratings, pm).unwrap()
        })
        .collect()
}

fn estimate_projects(c: &mut Criterion) {
    let est = FuzzyEstimator::build(&NominalFisConfig::default()).unwrap();
    let records = projects();
    c.bench_function("estimate_60_projects", |b| {
        b.iter(|| {
            records
                .iter()
                .map(|r| est.estimate_project(black_box(r)).unwrap().total)
                .sum::<f64>()
        })
    });
}

fn full_matrix(c: &mut Criterion) {
    let records = projects();
    let mut group = c.benchmark_group("replicate");
    group.sample_size(10);
    group.bench_function("matrix_6_configs", |b| {
        b.iter(|| run_experiment(black_box(&records), &ExperimentConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, estimate_projects, full_matrix);
criterion_main!(benches);
