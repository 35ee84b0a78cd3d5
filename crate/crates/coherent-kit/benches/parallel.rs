//! Parallel-vs-sequential scaling of the data-parallel kernels.
//!
//! With the default `parallel` feature the rayon path is compared against
//! the same code pinned to a single worker; build the bench with
//! `--no-default-features` to time the true sequential fallback.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use coherent_kit::grid::{moments, Grid, WaveFunction};
use coherent_kit::phase_space::{completeness_residual, husimi, PhaseSpaceLattice};
use coherent_kit::quadrature::Quadrature;
use coherent_kit::states::{coherent_closed_form, CoherentLabel};
use coherent_kit::PhysicalConstants;

struct Setup {
    grid: Arc<Grid>,
    constants: PhysicalConstants,
    state: WaveFunction,
    lattice: PhaseSpaceLattice,
    quad: Quadrature,
}

fn setup() -> Setup {
    let grid = Grid::new(512, -20.0, 20.0).unwrap();
    let constants = PhysicalConstants::default();
    let label = CoherentLabel::from_center(1.0, -0.5, &constants).unwrap();
    let state = coherent_closed_form(&grid, &label, &constants).unwrap();
    let report = moments(&state, &constants).unwrap();
    let lattice = PhaseSpaceLattice::around(&report, &constants, 96, 96).unwrap();
    let quad = Quadrature::new(7.0, 64, 32).unwrap();
    Setup {
        grid,
        constants,
        state,
        lattice,
        quad,
    }
}

fn bench_husimi(c: &mut Criterion) {
    let s = setup();
    let mut group = c.benchmark_group("husimi_96x96");
    group.sample_size(10);

    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("sequential", |b| {
            b.iter(|| single.install(|| husimi(&s.state, &s.lattice).unwrap()))
        });
        group.bench_function("parallel", |b| {
            b.iter(|| husimi(&s.state, &s.lattice).unwrap())
        });
    }
    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential_fallback", |b| {
        b.iter(|| husimi(&s.state, &s.lattice).unwrap())
    });

    group.finish();
}

fn bench_completeness(c: &mut Criterion) {
    let s = setup();
    let mut group = c.benchmark_group("completeness_probe6");
    group.sample_size(10);

    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("sequential", |b| {
            b.iter(|| {
                single.install(|| completeness_residual(6, &s.quad, &s.grid, &s.constants).unwrap())
            })
        });
        group.bench_function("parallel", |b| {
            b.iter(|| completeness_residual(6, &s.quad, &s.grid, &s.constants).unwrap())
        });
    }
    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential_fallback", |b| {
        b.iter(|| completeness_residual(6, &s.quad, &s.grid, &s.constants).unwrap())
    });

    group.finish();
}

criterion_group!(benches, bench_husimi, bench_completeness);
criterion_main!(benches);
