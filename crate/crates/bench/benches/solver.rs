use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tricross_bench::{midgame, tri};
use tricross_core::solver::{solve_with, SolverOptions};
use tricross_core::{GameRules, GameState};

fn empty_boards(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve empty");
    group.sample_size(10);
    for (m, n, p, q) in [(4, 3, 1, 1), (4, 3, 1, 2), (6, 2, 1, 1), (6, 2, 1, 4)] {
        let topo = tri(m, n);
        let state = GameState::new(topo.clone(), GameRules::crossing(p, q)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("Δ({m},{n}) {p}:{q}")), &state, |b, s| {
            b.iter(|| solve_with(&topo, p, q, s, SolverOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn options(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve options");
    group.sample_size(10);
    let state = midgame(6, 3, 1, 1, 14);
    let topo = state.topology_arc().clone();
    for (name, memo, symmetry, parallel) in
        [("all", true, true, true), ("single thread", true, true, false), ("no symmetry", true, false, true)]
    {
        let opts = SolverOptions { memo, symmetry, parallel, ..SolverOptions::default() };
        group.bench_function(name, |b| b.iter(|| solve_with(&topo, 1, 1, &state, opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, empty_boards, options);
criterion_main!(benches);
