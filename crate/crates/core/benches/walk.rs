use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gqw_core::geometry::MetricField;
use gqw_core::lattice::{LatticeSpec, OperatorPath, Strategy};
use gqw_core::walk::{init_packet, PacketSpec, StepOptions, Walker};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn gem_step(c: &mut Criterion) {
    let l = LatticeSpec::new(4096, 1.0).unwrap();
    let mut group = c.benchmark_group("gem_step_n4096");
    for (name, parallel) in modes() {
        let opts = StepOptions { parallel, ..StepOptions::default() };
        let mut w = Walker::new(MetricField::gem(-0.2), 0.3, l, opts);
        let mut s = init_packet(&PacketSpec::gaussian(1024.0, 300.0), &l).unwrap();
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| w.step(black_box(&mut s)).unwrap()));
    }
    group.finish();
}

fn dense_step_operator(c: &mut Criterion) {
    let l = LatticeSpec::new(256, 1.0).unwrap();
    let metric = MetricField::from_expressions("1 + 0.2*sin(x1/20)", "0.1*cos(x1/15)", "-1").unwrap();
    let mut group = c.benchmark_group("dense_step_operator_n256");
    group.sample_size(20);
    for (name, parallel) in modes() {
        let opts = StepOptions { parallel, path: OperatorPath::Dense, ..StepOptions::default().with_strategy(Strategy::Exponential) };
        let w = Walker::new(metric.clone(), 0.3, l, opts);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(w.step_unitary(0).unwrap())));
    }
    group.finish();
}

fn frames(c: &mut Criterion) {
    let l = LatticeSpec::new(1 << 16, 0.01).unwrap();
    let metric = MetricField::from_expressions("1 + 0.2*sin(x1)", "0.1*cos(x0 + x1)", "-1 - 0.1*sin(x1)^2").unwrap();
    let mut group = c.benchmark_group("frames_n65536");
    for (name, parallel) in modes() {
        let opts = StepOptions { parallel, ..StepOptions::default() };
        let w = Walker::new(metric.clone(), 0.3, l, opts);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(w.frames(3).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, gem_step, dense_step_operator, frames);
criterion_main!(benches);
