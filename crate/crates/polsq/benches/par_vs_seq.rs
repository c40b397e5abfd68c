//! Parallel-versus-sequential comparison of the data-parallel hot paths:
//! direction-grid factor evaluation and the amplified θ-sweep. With default
//! features the parallel targets go through rayon; building the bench with
//! `--no-default-features` leaves only the sequential reference.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polsq::amplifier::CutoffPolicy;
use polsq::exec;
use polsq::polarization::{jones_from_angles, polarized_number_state, PolarizationAngles};
use polsq::sphere::equal_area_grid;
use polsq::squeezing::{full_report, general_factor_from};
use polsq::stokes::StokesMoments;
use polsq::sweep::{fig_rows, fig_rows_seq, FigSpec};

fn bench_direction_grid(c: &mut Criterion) {
    let state = polarized_number_state(8, &jones_from_angles(PolarizationAngles::new(1.0, 0.7)));
    let moments = StokesMoments::of(&state);
    let grid = equal_area_grid(48, 96);
    let mut group = c.benchmark_group("direction_grid");
    group.bench_with_input(BenchmarkId::new("sequential", grid.len()), &grid, |b, grid| {
        b.iter(|| {
            exec::map_ordered_seq(grid, |n| general_factor_from(&moments, n).unwrap())
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_with_input(BenchmarkId::new("parallel", grid.len()), &grid, |b, grid| {
        b.iter(|| full_report(&state, grid).unwrap())
    });
    group.finish();
}

fn bench_fig_sweep(c: &mut Criterion) {
    let spec = FigSpec {
        figure: 1,
        n: 8,
        gt: 0.1,
        points: 24,
    };
    let policy = CutoffPolicy::default();
    let mut group = c.benchmark_group("fig_sweep");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| fig_rows_seq(&spec, &policy).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| b.iter(|| fig_rows(&spec, &policy).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_direction_grid, bench_fig_sweep);
criterion_main!(benches);
