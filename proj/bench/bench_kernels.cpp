// Serial reference vs OpenMP path for the data-parallel kernels.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "cylcs/dynamics.hpp"
#include "cylcs/symbols.hpp"

using namespace cylcs;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_QuantizeGeneric(benchmark::State& state) {
  const auto g = ActionDistribution::gaussian(0.8);
  const auto f = ObservableSpec::cosine(1.0);
  const QuantizeOptions opt{QuantizeMethod::generic, 1e-12, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(quantize(g, f, 40, opt));
}

void BM_LowerSymbolField(benchmark::State& state) {
  const auto g = ActionDistribution::gaussian(1.0);
  const auto A = angle_operator(g, 60);
  const auto pts = PhaseGrid{-3, 3, 61, 64}.points();
  for (auto _ : state) benchmark::DoNotOptimize(lower_symbol_field(g, A, pts, exec_of(state)));
}

void BM_LocalizationFrames(benchmark::State& state) {
  const auto g = ActionDistribution::gaussian(1.0);
  const Propagator U(quantize(g, ObservableSpec::action_squared(), 40));
  const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  const PhaseGrid grid{-6, 6, 81, 64};
  for (auto _ : state)
    benchmark::DoNotOptimize(localization_frames(g, U, PhasePoint(0.3, 1.0), times, grid, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_QuantizeGeneric)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LowerSymbolField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalizationFrames)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
