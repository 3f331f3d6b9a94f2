#include <benchmark/benchmark.h>

#include "rscreen/averaging.hpp"
#include "rscreen/simulator.hpp"

using namespace rscreen;

namespace {

const ScreenParams kStopped = ScreenParams{}.with_k1(25.0);
const Amplitudes kZero(-0.0394, 0.0002, 0.001, -0.0005);

void BM_SwitchingTimes(benchmark::State& state) {
  const GeneratingBasis b = GeneratingBasis::from_params(kStopped);
  for (auto _ : state) benchmark::DoNotOptimize(switching_times(kZero, b));
}
BENCHMARK(BM_SwitchingTimes);

void BM_AverageNumeric(benchmark::State& state) {
  const GeneratingBasis b = GeneratingBasis::from_params(kStopped);
  for (auto _ : state) benchmark::DoNotOptimize(average_numeric(kZero, kStopped, b));
}
BENCHMARK(BM_AverageNumeric);

void BM_NewtonZero(benchmark::State& state) {
  const GeneratingBasis b = GeneratingBasis::from_params(kStopped);
  const AveragedField field = numeric_field(kStopped, b);
  const Amplitudes seed = analytic_zero(coefficients(kStopped, b));
  for (auto _ : state) benchmark::DoNotOptimize(newton_zero(field, seed));
}
BENCHMARK(BM_NewtonZero)->Unit(benchmark::kMillisecond);

void BM_PoincareMap(benchmark::State& state) {
  const Simulator sim(kStopped);
  const double h = sim.period() / static_cast<double>(state.range(0));
  const PhysState s{0.43, 0.29, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(sim.poincare(s, h));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PoincareMap)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_FixedPoint(benchmark::State& state) {
  const Simulator sim(kStopped);
  const GeneratingBasis& b = sim.basis();
  const Amplitudes a = newton_zero(numeric_field(kStopped, b), analytic_zero(coefficients(kStopped, b))).zero;
  const PhysState seed = averaged_seed(a, b, kStopped);
  for (auto _ : state) benchmark::DoNotOptimize(sim.find_fixed_point(seed, sim.default_step()));
}
BENCHMARK(BM_FixedPoint)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
