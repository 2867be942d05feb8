//! Criterion benchmarks for the hot loops: animal enumeration, GLA
//! optimizers, heat-bath sweeps, ground states and polygon growth.

use criterion::{black_box, Criterion};
use rfpm_core::field::{FieldConvention, FieldRealization};
use rfpm_core::gla::{AnnealSchedule, Scorer};
use rfpm_core::lattice::{enumerate_animals, BoxSpec, Site};
use rfpm_core::polygon::{run_construction, Variant};
use rfpm_core::potts::{BoundaryCondition, GroundStateMethod, PottsSystem, SpinConfig};
use rfpm_core::rng::{self, Purpose};
use rfpm_core::WeightMode;

fn field(n: u32, q: usize, seed: u64) -> FieldRealization {
    FieldRealization::sample(BoxSpec::new(n), q, 1.0, seed, FieldConvention::UnitVariance).expect("valid field")
}

pub fn benchmarks(c: &mut Criterion) {
    c.bench_function("enumerate_animals N=3 size<=7", |b| {
        b.iter(|| enumerate_animals(BoxSpec::new(3), black_box(7)).count())
    });

    let small = field(2, 3, 1);
    c.bench_function("exact_gla N=2 size<=8", |b| {
        b.iter(|| Scorer::new(&small, WeightMode::AllColors).exact(black_box(8), None))
    });

    let mid = field(16, 2, 1);
    c.bench_function("greedy_gla N=16", |b| {
        b.iter(|| Scorer::new(&mid, WeightMode::AllColors).greedy(Site::ORIGIN, usize::MAX))
    });
    let schedule = AnnealSchedule {
        sweeps: 10,
        restarts: 1,
        ..AnnealSchedule::default()
    };
    c.bench_function("anneal_gla N=16 10 sweeps", |b| {
        b.iter(|| Scorer::new(&mid, WeightMode::AllColors).anneal(schedule, black_box(3)))
    });

    let potts_field = field(16, 3, 2);
    let system = PottsSystem::from_field(&potts_field, 1.0).expect("system");
    let mut config =
        SpinConfig::uniform(system.grid(), 3, 0, BoundaryCondition::Wired(0)).expect("uniform config");
    let mut stream = rng::purpose_stream(0, Purpose::HeatBath, 0);
    c.bench_function("heat_bath_sweep N=16 q=3", |b| {
        b.iter(|| system.heat_bath_sweep(&mut config, 0.8, &mut stream))
    });
    c.bench_function("ground_state expansion N=16 q=3", |b| {
        b.iter(|| system.ground_state(BoundaryCondition::Wired(0), GroundStateMethod::Expansion, 0))
    });

    let poly_field = field(64, 2, 5);
    c.bench_function("polygon construction N=64 4 levels", |b| {
        b.iter(|| run_construction(&poly_field, 1.0, 4, Variant::Deterministic, 0))
    });
}
