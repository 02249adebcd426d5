use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lebp::figures::two_point_arc;
use lebp::numerics::Execution;
use lebp::passage_densities::first_passage_mass;
use lebp::rect_kernels::{RectConfig, SeriesPolicy};
use lebp::weyl::WeylPoint;

const MODES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn chamber_mass(c: &mut Criterion) {
    let cfg = RectConfig::new(3.0).unwrap();
    let pol = SeriesPolicy::default();
    let phi = WeylPoint::new(vec![0.8, 1.6, 2.4]).unwrap();
    let mut g = c.benchmark_group("first_passage_mass_n3");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| first_passage_mass(&cfg, &pol, black_box(1.5), &phi, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn arc_two_point(c: &mut Criterion) {
    let pol = SeriesPolicy::default();
    let mut g = c.benchmark_group("two_point_arc_n20");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| two_point_arc(20, black_box(4.0), std::f64::consts::FRAC_PI_2, 401, &pol, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, chamber_mass, arc_two_point);
criterion_main!(benches);
