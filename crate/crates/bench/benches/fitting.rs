use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use expfit::{
    assemble, solve, AssemblyOptions, DivFreeBasis, Expression, FitOptions, FittedBasis, Mesh, NodeKind, NodeSet,
    PathRule, Point3, ProblemSpec, Side, SolverOptions,
};

fn radial(p: &Point3) -> f64 {
    (-2.0 * (p[0] * p[0] + p[1] * p[1]).sqrt()).exp()
}

fn problem(nodes: NodeKind, order: usize) -> ProblemSpec {
    let e = |s: &str| s.parse::<Expression>().unwrap();
    ProblemSpec {
        diffusion: 1.0,
        beta: 1.0,
        phi: e("4*exp(-2*sqrt(x^2+y^2))"),
        f: e("1"),
        g: e("0"),
        grad_phi: None,
        order,
        nodes,
        options: FitOptions::default(),
        triangle_degree: 8,
    }
}

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("basis");
    for path in [PathRule::XThenY, PathRule::StraightLine, PathRule::AverageXYYX] {
        g.bench_with_input(BenchmarkId::new("rt0_vertices", path), &path, |b, &path| {
            let nodes = NodeSet::new(0, NodeKind::Vertices).unwrap();
            let opts = FitOptions { path, ..FitOptions::default() };
            b.iter(|| FittedBasis::new(DivFreeBasis::rt0_2d(), nodes.clone(), radial, 1.0, 1.0, opts).unwrap())
        });
    }
    g.bench_function("rt1_p2", |b| {
        let nodes = NodeSet::new(1, NodeKind::P2).unwrap();
        b.iter(|| FittedBasis::new(DivFreeBasis::rt1_2d(), nodes.clone(), radial, 1.0, 1.0, FitOptions::default()).unwrap())
    });
    g.bench_function("rt0_vertices_eval", |b| {
        let fb = FittedBasis::new(
            DivFreeBasis::rt0_2d(),
            NodeSet::new(0, NodeKind::Vertices).unwrap(),
            radial,
            1.0,
            1.0,
            FitOptions::default(),
        )
        .unwrap();
        b.iter(|| fb.rho_all(black_box(&[0.3, 0.4, 0.0])).unwrap())
    });
    g.finish();
}

fn global(c: &mut Criterion) {
    let mut g = c.benchmark_group("global");
    g.sample_size(10);
    for n in [8, 16, 32] {
        let mesh = Mesh::unit_square(n, &Side::ALL);
        for (kind, order) in [(NodeKind::Vertices, 0), (NodeKind::Midpoints, 0)] {
            let p = problem(kind, order);
            g.bench_with_input(BenchmarkId::new(format!("assemble_{}", kind.name()), n), &n, |b, _| {
                b.iter(|| assemble(&mesh, &p, AssemblyOptions::default()).unwrap())
            });
        }
        let p = problem(NodeKind::Vertices, 0);
        g.bench_with_input(BenchmarkId::new("assemble_serial_vertices", n), &n, |b, _| {
            b.iter(|| assemble(&mesh, &p, AssemblyOptions { parallel: false }).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("solve_vertices", n), &n, |b, _| {
            b.iter(|| {
                let sys = assemble(&mesh, &p, AssemblyOptions::default()).unwrap();
                solve(sys, SolverOptions::default()).unwrap().nodal_rho().len()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, basis, global);
criterion_main!(benches);
