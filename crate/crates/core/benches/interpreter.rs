use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rwsem::bench::case;
use rwsem::interpreter::{run, run_batch, RunOptions};
use rwsem::semantics::check_trace;
use rwsem::{default_model, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn trace_checking(c: &mut Criterion) {
    let model = default_model();
    let mut group = c.benchmark_group("check_trace");
    group.sample_size(10);
    for (name, n) in [("two-counters", 2_000), ("imp-count-to", 20)] {
        let bc = case(name).unwrap();
        let theory = bc.compile(&model).unwrap();
        let start = bc.start(&theory, n);
        let trace = run(
            &model,
            &theory,
            start.clone(),
            RunOptions::with_fuel((bc.fuel)(n)).traced(),
        )
        .unwrap()
        .trace
        .unwrap();
        for (label, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, format!("{name}/{n}")), &mode, |b, &mode| {
                b.iter(|| check_trace(&model, &theory, &start, &trace, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn batch_runs(c: &mut Criterion) {
    let model = default_model();
    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    let bc = case("unary-fib").unwrap();
    let theory = bc.compile(&model).unwrap();
    let starts: Vec<_> = (0..12).map(|n| bc.start(&theory, n)).collect();
    let options = RunOptions::with_fuel(1_000_000);
    for (label, mode) in MODES {
        group.bench_function(BenchmarkId::new(label, "unary-fib/0..12"), |b| {
            b.iter(|| run_batch(&model, &theory, &starts, options, mode))
        });
    }
    group.finish();
}

fn single_runs(c: &mut Criterion) {
    let model = default_model();
    let mut group = c.benchmark_group("run");
    group.sample_size(10);
    for (name, n) in [("two-counters", 10_000), ("imp-count-to", 50), ("native-fib", 1_000)] {
        let bc = case(name).unwrap();
        let theory = bc.compile(&model).unwrap();
        let start = bc.start(&theory, n);
        let options = RunOptions::with_fuel((bc.fuel)(n));
        group.bench_function(BenchmarkId::new(name, n), |b| {
            b.iter(|| run(&model, &theory, start.clone(), options).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trace_checking, batch_runs, single_runs);
criterion_main!(benches);
