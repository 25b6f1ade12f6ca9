//! Sequential versus rayon execution of the embarrassingly parallel sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thermal_ep::dynamics::log_grid;
use thermal_ep::dynamics::{linear_grid, propagate_ode, OdeOptions};
use thermal_ep::model::basis::Sector;
use thermal_ep::model::liouvillian::build_local_liouvillian;
use thermal_ep::model::params::{BathStatistics, MachineParams, Regime};
use thermal_ep::model::sampling::{random_state, sample_params, ParamRanges};
use thermal_ep::spectral::eigen::decompose;
use thermal_ep::spectral::ep::{eta_beta_loci, FreeParameter};
use thermal_ep::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn random_spectra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<MachineParams> = (0..64)
        .map(|_| sample_params(&mut rng, &ParamRanges::default(), BathStatistics::Bosonic, Regime::Local))
        .collect();
    let mut group = c.benchmark_group("random_spectra");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(&draws, |p| decompose(&build_local_liouvillian(p).unwrap()).unwrap().defective))
        });
    }
    group.finish();
}

fn ep_loci(c: &mut Criterion) {
    let base = MachineParams::new(1.0, 1.5, 0.1, 0.01, 0.01, 0.0).unwrap();
    let xs = log_grid(1e-4, 0.1, 64).unwrap();
    let mut group = c.benchmark_group("ep_loci");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| eta_beta_loci(&base, FreeParameter::GammaBoth, black_box(&xs), (0.0, 2.0), exec).unwrap())
        });
    }
    group.finish();
}

fn multi_state_ode(c: &mut Criterion) {
    let p = MachineParams::new(1.0, 3.0, 0.7, 0.01, 0.01, 0.005).unwrap();
    let l = build_local_liouvillian(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let states: Vec<_> = (0..16).map(|_| random_state(&mut rng, Sector::Full)).collect();
    let grid = linear_grid(0.0, 100.0, 21).unwrap();
    let opts = OdeOptions::default();
    let mut group = c.benchmark_group("multi_state_ode");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(&states, |rho| propagate_ode(&l, rho, &grid, &opts).unwrap().len()))
        });
    }
    group.finish();
}

criterion_group!(benches, random_spectra, ep_loci, multi_state_ode);
criterion_main!(benches);
