use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use expprod::propagate::{QuantumState, SpinSystem, UnitaryStepper};
use expprod::qmc::Chain;
use expprod::schemes::by_name;
use expprod::{verify_order, IsingModel};

fn product_log(c: &mut Criterion) {
    let mut g = c.benchmark_group("product_log_rational");
    for (name, order) in [("strang", 5), ("triple4", 5), ("s6", 7)] {
        let s = by_name(name).unwrap();
        g.bench_with_input(BenchmarkId::new(name, order), &order, |b, &m| {
            b.iter(|| s.product_log_rational(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn schemes(c: &mut Criterion) {
    c.bench_function("construct s6", |b| b.iter(|| by_name(black_box("s6")).unwrap()));
    let s = by_name("triple4").unwrap();
    c.bench_function("verify_order triple4", |b| b.iter(|| verify_order(&s, black_box(6)).unwrap()));
}

fn stepping(c: &mut Criterion) {
    let sys = SpinSystem::new(0.75);
    let parts = sys.parts();
    let mut g = c.benchmark_group("unitary_step_x1000");
    for name in ["strang", "triple4", "s6"] {
        let s = by_name(name).unwrap();
        let stepper = UnitaryStepper::new(&s, &parts, 1e-3).unwrap();
        g.bench_function(name, |b| {
            b.iter(|| {
                let mut psi = QuantumState::basis(2, 0);
                for _ in 0..1000 {
                    stepper.step(&mut psi).unwrap();
                }
                psi
            })
        });
    }
    g.finish();
}

fn metropolis(c: &mut Criterion) {
    let mut g = c.benchmark_group("metropolis_sweep");
    for (sites, n) in [(4, 16), (8, 32)] {
        let model = IsingModel::chain(sites, 1.0, 1.0, 1.0).unwrap();
        let mut chain = Chain::new(&model, n, 42, 0).unwrap();
        g.bench_function(format!("chain{sites}_n{n}"), |b| b.iter(|| chain.sweep()));
    }
    g.finish();
}

criterion_group!(benches, product_log, schemes, stepping, metropolis);
criterion_main!(benches);
