use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mimetic_bench::{label, spec, CASES};
use mimetic_core::assembly::assemble_mass;
use mimetic_core::solvers::{assemble_dual, assemble_single, solve, Method};

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assembly");
    for (n, m) in CASES {
        let s = spec(Method::Dual, n, m);
        let mesh = s.mesh().unwrap();
        let q = s.quad_order();
        g.bench_with_input(BenchmarkId::new("mass_1form", label(n, m)), &mesh, |b, mesh| {
            b.iter(|| assemble_mass(mesh, 1, q).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("dual_system", label(n, m)), &mesh, |b, mesh| {
            b.iter(|| assemble_dual(&s, mesh).unwrap())
        });
        let single = spec(Method::Single, n, m);
        g.bench_with_input(BenchmarkId::new("single_system", label(n, m)), &mesh, |b, mesh| {
            b.iter(|| assemble_single(&single, mesh).unwrap())
        });
    }
    g.finish();
}

fn solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(20);
    for (n, m) in CASES {
        for method in [Method::Dual, Method::Single] {
            let s = spec(method, n, m);
            g.bench_with_input(BenchmarkId::new(method.name(), label(n, m)), &s, |b, s| b.iter(|| solve(s).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, assembly, solvers);
criterion_main!(benches);
