#include <benchmark/benchmark.h>

#include <numbers>

#include "cauchy/experiment.hpp"
#include "cauchy/fem.hpp"
#include "cauchy/kmf.hpp"
#include "cauchy/mesh.hpp"

namespace {

using namespace cauchy;

constexpr double kTheta = std::numbers::pi / 3;

void BM_GenerateDiskMesh(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate_disk_mesh(n, kTheta));
}
BENCHMARK(BM_GenerateDiskMesh)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AssembleStiffness(benchmark::State& state) {
    const auto mesh = generate_disk_mesh(static_cast<int>(state.range(0)), kTheta);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(mesh));
    state.counters["vertices"] = static_cast<double>(mesh.num_vertices());
}
BENCHMARK(BM_AssembleStiffness)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_DirichletSolve(benchmark::State& state) {
    const auto mesh = generate_disk_mesh(static_cast<int>(state.range(0)), kTheta);
    MixedBVPSpec spec;
    spec.dirichlet(interpolate_boundary(exact_solution, mesh, kGamma0))
        .dirichlet(interpolate_boundary(exact_solution, mesh, kGamma1));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mixed_bvp(mesh, spec));
}
BENCHMARK(BM_DirichletSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_KmfIterations(benchmark::State& state) {
    ExperimentConfig config;
    config.theta = kTheta;
    config.n_boundary = 128;
    const auto p = build_section5_problem(config);
    KmfOptions options;
    options.max_iters = 20;
    const bool alternating = state.range(0) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(alternating ? kmf_alternating(p.mesh, p.data, p.u0, options)
                                             : kmf_standard(p.mesh, p.data, p.u0, options));
    }
    state.SetLabel(alternating ? "alternating, 20 iterations" : "standard, 20 iterations");
}
BENCHMARK(BM_KmfIterations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
