use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tepai_core::estimate::{hadamard_test_instance, run_ensemble, EnsembleConfig};
use tepai_core::experiments::AdiabaticProblem;
use tepai_core::models::{generate_sparse_syk, SykParams};
use tepai_core::rng::{stream, SeedStream};
use tepai_core::sampling::{AdiabaticSchedule, Direction, TepaiSampler, TetrisSampler};
use tepai_core::{compile_to_gateset, GateSet};

fn samplers(c: &mut Criterion) {
    let p = AdiabaticProblem::h3plus().unwrap();
    let schedule = AdiabaticSchedule::linear(8.0).unwrap();
    let prep = TepaiSampler::adiabatic(&p.h_hf, &p.h_int, &schedule, 0.1).unwrap();
    let tetris = TetrisSampler::new(&p.h_hf, &p.h_int, 10.0, 0.1).unwrap();
    let syk = generate_sparse_syk(&SykParams::new(18, 2.3, 0)).unwrap();
    let split = TepaiSampler::split(&syk, 2.0, 0.05).unwrap();

    let mut rng = stream(3, &[]);
    c.bench_function("sample_adiabatic_h3plus", |b| b.iter(|| prep.sample(&mut rng)));
    c.bench_function("sample_tetris_h3plus", |b| b.iter(|| tetris.sample(&mut rng)));
    c.bench_function("sample_split_syk18", |b| b.iter(|| split.sample(&mut rng)));

    let circuit = prep.sample(&mut rng);
    c.bench_function("lower_and_compile_h3plus", |b| {
        b.iter(|| {
            let ops = black_box(&circuit).to_gateops(Direction::Forward, Some(6)).unwrap();
            compile_to_gateset(&ops, 7, GateSet::Cx).unwrap().two_qubit_count()
        })
    });
}

fn ensemble(c: &mut Criterion) {
    let p = AdiabaticProblem::h3plus().unwrap();
    let schedule = AdiabaticSchedule::linear(8.0).unwrap();
    let prep = TepaiSampler::adiabatic(&p.h_hf, &p.h_int, &schedule, 0.1).unwrap();
    let tetris = TetrisSampler::new(&p.h_hf, &p.h_int, 10.0, 0.1).unwrap();
    let factory = |_: usize, seeds: &SeedStream| {
        let u = prep.sample(&mut seeds.rng(&[0]));
        let v = tetris.sample(&mut seeds.rng(&[1]));
        hadamard_test_instance(&p.hf_state, Some(&u), &v)
    };
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    group.bench_function("hadamard_h3plus_64", |b| {
        b.iter(|| run_ensemble(&EnsembleConfig::exact(64, 5), &factory).unwrap().complex_mean())
    });
    group.finish();
}

criterion_group!(benches, samplers, ensemble);
criterion_main!(benches);
