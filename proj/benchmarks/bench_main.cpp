#include <benchmark/benchmark.h>

#include <vector>

#include "sgdephase/kernel.hpp"
#include "sgdephase/montecarlo.hpp"
#include "sgdephase/noise.hpp"

namespace {

using namespace sgdephase;

void BM_KernelEval(benchmark::State& state) {
  double xi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel::f_aa(xi));
    xi += 1e-3;
    if (xi > 10.0) xi = -10.0;
  }
}
BENCHMARK(BM_KernelEval);

void BM_KernelIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernel::kernel_integral());
}
BENCHMARK(BM_KernelIntegral)->Unit(benchmark::kMillisecond);

void BM_SynthWhite(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(noise::synth_white(1.0, 1e-4, n, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthWhite)->Range(1 << 10, 1 << 16);

void BM_SynthColored(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto psd = noise::PsdSpec::tabulated({0.0, 1e3, 4e4}, {1.0, 2.0, 0.5});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(noise::synth_colored(psd, 1e-4, n, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthColored)->Range(1 << 10, 1 << 18);

void BM_Welch(benchmark::State& state) {
  const auto trace = noise::synth_white(1.0, 1e-4, 1 << 18, 1);
  for (auto _ : state) benchmark::DoNotOptimize(noise::estimate_psd(trace));
}
BENCHMARK(BM_Welch)->Unit(benchmark::kMillisecond);

void BM_FullActionShot(benchmark::State& state) {
  ExperimentParams p;
  p.theta0 = 0.0;
  p.accel = 0.0;
  const auto m = derive(p);
  const auto steps = static_cast<std::size_t>(state.range(0));
  const double dt = m.tau / static_cast<double>(steps);
  const montecarlo::FullActionIntegrator integ(m, p, steps);
  const std::vector<noise::NoiseTrace> traces = {noise::synth_white(1e-26, dt, steps, 1, 0),
                                                 noise::synth_white(1e-26, dt, steps, 1, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(integ.phase(dephasing::Channel::kAccel, traces));
}
BENCHMARK(BM_FullActionShot)->Arg(1 << 10)->Arg(1 << 14);

void BM_McLinear(benchmark::State& state) {
  ExperimentParams p;
  p.theta0 = 0.0;
  p.accel = 0.0;
  const auto m = derive(p);
  montecarlo::McConfig c;
  c.n_shots = 1000;
  c.steps = static_cast<std::size_t>(state.range(0));
  c.psd = noise::PsdSpec::white(1e-22);
  for (auto _ : state) benchmark::DoNotOptimize(montecarlo::mc_variance(c, m, p));
}
BENCHMARK(BM_McLinear)->Arg(1 << 10)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
