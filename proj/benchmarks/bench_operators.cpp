#include <benchmark/benchmark.h>

#include "scbf/cbf_operators.hpp"
#include "scbf/integrator.hpp"
#include "scbf/spectral_ops.hpp"

using namespace scbf;

namespace {

SpectralField test_field(int dim, int n, int oversample) {
    return random_divfree_field(make_shared_domain(dim, n, oversample), 3.0, 1.0, 42);
}

void bm_bilinear_b_2d(benchmark::State& state) {
    const SpectralField u = test_field(2, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(bilinear_b(u));
}
BENCHMARK(bm_bilinear_b_2d)->Arg(32)->Arg(64);

void bm_nonlinear_c_2d(benchmark::State& state) {
    const SpectralField u = test_field(2, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(nonlinear_c(u, 3.0));
}
BENCHMARK(bm_nonlinear_c_2d)->Arg(32)->Arg(64);

void bm_nonlinear_c_3d(benchmark::State& state) {
    const SpectralField u = test_field(3, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(nonlinear_c(u, 3.0));
}
BENCHMARK(bm_nonlinear_c_3d)->Arg(16);

void bm_deterministic_step_2d(benchmark::State& state) {
    SimulationConfig cfg;
    cfg.domain = make_shared_domain(2, static_cast<int>(state.range(0)), 2);
    cfg.params = CBFParameters{1.0, 1.0, 3.0};
    const SpectralField u = random_divfree_field(cfg.domain, 3.0, 1.0, 7);
    for (auto _ : state) benchmark::DoNotOptimize(deterministic_step(u, 1e-3, cfg));
}
BENCHMARK(bm_deterministic_step_2d)->Arg(32)->Arg(64);

void bm_norm_lp(benchmark::State& state) {
    const SpectralField u = test_field(2, 32, 4);
    for (auto _ : state) benchmark::DoNotOptimize(norm_lp(u, 4.0));
}
BENCHMARK(bm_norm_lp);

}  // namespace

BENCHMARK_MAIN();
