use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swssb_core::exact::{all_correlators, build_reference_state, ReferenceKind};
use swssb_core::fermion::{
    build_majorana_model, r1_tfim_detailed, ParityTreatment, Sector, ThermalPropagator,
};
use swssb_core::ising::{r2_annealed, Lattice, SyndromeTable};
use swssb_core::linalg::{pfaffian, AntisymmetricMatrix, C64};
use swssb_core::stabilizer::{percolation_sample, PercolationConfig};
use swssb_core::{Letter, PauliString};

fn pfaffians(c: &mut Criterion) {
    let mut group = c.benchmark_group("pfaffian");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [64, 128, 256] {
        let m = AntisymmetricMatrix::from_upper(n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
        .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| pfaffian(black_box(m)))
        });
    }
    group.finish();
}

fn dense_correlators(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_correlators");
    group.sample_size(10);
    for n in [6, 8] {
        let rho = build_reference_state(&ReferenceKind::ParityGibbs {
            n,
            j: 1.0,
            g: 1.0,
            beta: 1.0,
        })
        .unwrap();
        let zz = PauliString::single(n, 0, Letter::Z).mul(&PauliString::single(n, n / 2, Letter::Z));
        let id = PauliString::identity(n);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| all_correlators(black_box(&rho), &zz, &id).unwrap())
        });
    }
    group.finish();
}

fn tfim_point(c: &mut Criterion) {
    let mut group = c.benchmark_group("r1_tfim");
    group.sample_size(10);
    for l in [32, 128] {
        let prop =
            ThermalPropagator::new(build_majorana_model(l, 1.0, 1.0, Sector::Antiperiodic).unwrap())
                .unwrap();
        group.bench_function(BenchmarkId::from_parameter(l), |b| {
            b.iter(|| r1_tfim_detailed(&prop, 2.0, 0, l / 2, ParityTreatment::Projected).unwrap())
        });
    }
    // Deep in the paramagnet the value sits below double precision and goes
    // through MPFR.
    let prop =
        ThermalPropagator::new(build_majorana_model(128, 1.0, 16.0, Sector::Antiperiodic).unwrap())
            .unwrap();
    group.bench_function("128_multiprecision", |b| {
        b.iter(|| r1_tfim_detailed(&prop, 1.0 / 0.15, 0, 64, ParityTreatment::Projected).unwrap())
    });
    group.finish();
}

fn ising(c: &mut Criterion) {
    let lat = Lattice::chain(16).unwrap();
    c.bench_function("syndrome_table_chain16", |b| {
        b.iter(|| SyndromeTable::enumerate(black_box(&lat), 0.2).unwrap())
    });
    let sq = Lattice::square(6).unwrap();
    c.bench_function("r2_annealed_square6", |b| {
        b.iter(|| r2_annealed(black_box(&sq), 0.1, 0, 3).unwrap())
    });
}

fn percolation(c: &mut Criterion) {
    let cfg = PercolationConfig::new(2, 32, 0.5, 1, 3).unwrap();
    let mut i = 0u64;
    c.bench_function("percolation_sample_l32", |b| {
        b.iter(|| {
            i += 1;
            percolation_sample(black_box(&cfg), i)
        })
    });
}

criterion_group!(benches, pfaffians, dense_correlators, tfim_point, ising, percolation);
criterion_main!(benches);
