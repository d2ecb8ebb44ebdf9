#include <benchmark/benchmark.h>

#include "coreshell/analysis.hpp"

using namespace coreshell;

namespace {

const CoreShellGeometry kInterval = build_geometry(GeometryKind::interval, 1, 0.5, 1.0);

Mesh mesh_of(benchmark::State& state) { return build_mesh(kInterval, 1.0 / static_cast<double>(state.range(0))); }

SolveConfig steps(std::size_t n, std::size_t modes) {
    SolveConfig c;
    c.t_final = 1e-3 * static_cast<double>(n);
    c.dt = 1e-3;
    c.modes = modes;
    c.snapshot_stride = n;
    return c;
}

const ReactionTerm kMichaelis = ReactionTerm::michaelis_menten(1.0, 0.5, 1.0);

}  // namespace

static void BM_Assemble(benchmark::State& state) {
    const Mesh mesh = mesh_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, DiffusionField(4.0, 1.0)));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(64, 4096);

static void BM_Eigenbasis(benchmark::State& state) {
    const auto op = assemble(mesh_of(state), DiffusionField(4.0, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(eigenbasis(op, 64));
}
BENCHMARK(BM_Eigenbasis)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_GalerkinSteps(benchmark::State& state) {
    const auto basis = eigenbasis(assemble(build_mesh(kInterval, 1.0 / 512), DiffusionField(4.0, 1.0)),
                                  static_cast<std::size_t>(state.range(0)));
    const auto cfg = steps(100, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(galerkin_solve(basis, kMichaelis, cfg));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GalerkinSteps)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_FemSteps(benchmark::State& state) {
    const auto op = assemble(mesh_of(state), DiffusionField(4.0, 1.0));
    const auto cfg = steps(100, 1);
    for (auto _ : state) benchmark::DoNotOptimize(fem_solve(op, kMichaelis, cfg));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_FemSteps)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_Stationary(benchmark::State& state) {
    const auto op = assemble(mesh_of(state), DiffusionField(4.0, 1.0));
    for (auto _ : state) benchmark::DoNotOptimize(stationary_solve(op, kMichaelis, op.zero_field()));
}
BENCHMARK(BM_Stationary)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
