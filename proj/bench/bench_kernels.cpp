// Serial reference against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "oppenheim/counting.hpp"
#include "oppenheim/lattice.hpp"

using namespace oppenheim;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_CountN(benchmark::State& state) {
  const SSet s({3});
  const auto q = random_generic_form(1, 3, s, 12).form;
  const SInterval I{RealInterval(-0.5L, 0.5L), {PAdicInterval{3, 0, 1}}};
  CountOptions opts;
  opts.execution = mode(state);
  const Radii T{static_cast<Real>(state.range(1)), {1}};
  for (auto _ : state) benchmark::DoNotOptimize(count_N(q, StarBody::unit(s), I, T, opts).count);
}

void BM_RealVolume(benchmark::State& state) {
  const auto q = random_generic_form(1, 3, SSet{}, 12).form;
  McOptions mc;
  mc.samples = static_cast<std::uint64_t>(state.range(1));
  mc.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        real_place_volume(q.real(), RealRadius::constant(1), RealInterval(-0.5L, 0.5L), 20, Region::Body, mc).value);
  }
}

void BM_Alpha(benchmark::State& state) {
  const auto lattice = random_lattice(3, 3, SSet({3}));
  for (auto _ : state) benchmark::DoNotOptimize(alpha_lower(lattice, 3, mode(state)).alpha);
}

}  // namespace

BENCHMARK(BM_CountN)->ArgsProduct({{0, 1}, {20, 40}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RealVolume)->ArgsProduct({{0, 1}, {1'000'000, 4'000'000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Alpha)->Args({0})->Args({1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
