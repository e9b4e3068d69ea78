//! Sequential vs parallel execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ldp_core::cgf::l_n_ar1_pivot;
use ldp_core::empirics::{count_hits, EventSpec, Statistic};
use ldp_core::exec::grid_map;
use ldp_core::figures::figure;
use ldp_core::{Ar1Params, Exec, LambdaPair};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_hits");
    group.sample_size(10);
    let params = Ar1Params::new(0.5).unwrap().into();
    let event = EventSpec::tail_ge(Statistic::YuleWalker, 0.7).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n=100,r=20000"), &exec, |b, &exec| {
            b.iter(|| count_hits(params, &event, 100, 20_000, 7, exec))
        });
    }
    group.finish();
}

fn figure_grids(c: &mut Criterion) {
    let mut group = c.benchmark_group("figure");
    group.sample_size(10);
    for id in [1, 3, 8] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, id), &exec, |b, &exec| b.iter(|| figure(id, exec).unwrap()));
        }
    }
    group.finish();
}

fn pivot_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("pivot_grid");
    group.sample_size(10);
    let l1s: Vec<f64> = (0..40).map(|k| -2.0 + 2.6 * k as f64 / 39.0).collect();
    let l2s: Vec<f64> = (0..40).map(|k| -2.5 + 3.5 * k as f64 / 39.0).collect();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "40x40,n=512"), &exec, |b, &exec| {
            b.iter(|| grid_map(exec, &l1s, &l2s, |l1, l2| l_n_ar1_pivot(LambdaPair::new(l1, l2), 0.9, 512).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, figure_grids, pivot_grid);
criterion_main!(benches);
