// Throughput benchmarks for the solver hot paths: field synthesis, the
// distance solve, the discounted cell problem, and the time-stepping loop.
// Grid sizes are chosen so a full pass stays in the millisecond range.

#include <benchmark/benchmark.h>

#include <cmath>

#include "hjhomog/cell.hpp"
#include "hjhomog/evolve.hpp"
#include "hjhomog/metric.hpp"
#include "hjhomog/potential.hpp"

namespace {

using namespace hjhomog;

EnsembleSpec bumps() {
    EnsembleSpec s;
    s.kind = EnsembleKind::PoissonBumps;
    s.dim = 2;
    s.seed = 1234;
    return s;
}

EnsembleSpec cosine1d() {
    EnsembleSpec s;
    s.kind = EnsembleKind::ShiftedPeriodic;
    s.dim = 1;
    s.seed = 1234;
    return s;
}

void BM_SamplePotential2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double h = 4.0 / n;
    const Grid g = Grid::make(2, h, 2.0);
    const EnsembleSpec spec = bumps();
    std::uint64_t realization = 0;
    for (auto _ : state) {
        PotentialField f = sample_potential(spec, g, realization++);
        benchmark::DoNotOptimize(f.values.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_SamplePotential2D)->Arg(64)->Arg(128)->Arg(256);

void BM_MetricSolve2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double h = 3.0 / n;
    const Grid g = Grid::make(2, h, 1.5);
    const PotentialField f = sample_potential(bumps(), g, 0);
    MetricOptions opt;
    opt.target_radius = 1.0;
    for (auto _ : state) {
        MetricField m = solve_metric(f, {0.0, 1.0}, {0.0, 0.0}, opt);
        benchmark::DoNotOptimize(m.values.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_MetricSolve2D)->Arg(96)->Arg(192)->Arg(384);

void BM_CellSolve1D(benchmark::State& state) {
    const double h = 1.0 / 128;
    const Grid g = Grid::make(1, h, 0.5, /*periodic=*/true);
    const PotentialField f = sample_potential(cosine1d(), g, 0);
    const double delta = 1.0 / state.range(0);
    for (auto _ : state) {
        CellSolution s = solve_cell(f, {0.5, 0.0}, delta);
        benchmark::DoNotOptimize(s.minus_delta_v0);
        state.counters["sweeps"] = static_cast<double>(s.iterations);
    }
}
BENCHMARK(BM_CellSolve1D)->Arg(10)->Arg(20)->Arg(40);

void BM_Oscillatory1D(benchmark::State& state) {
    const double eps = 0.25;
    InitialData data;
    data.g = [](const Vec& x) { return 0.75 * x[0]; };
    data.lip = 0.75;
    data.name = "plane";
    EvolveOptions opt;
    opt.spacing = eps / state.range(0);
    opt.t_final = 0.25;
    opt.inner_radius = 1.0;
    const EnsembleSpec spec = cosine1d();
    for (auto _ : state) {
        EvolutionResult r = solve_oscillatory(spec, 0, eps, data, opt);
        benchmark::DoNotOptimize(r.slices.back().data());
    }
}
BENCHMARK(BM_Oscillatory1D)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
