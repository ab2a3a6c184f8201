// Batched env stepping: OpenMP fan-out against the serial reference.
//
//   bench_kernels [--benchmark_filter=...]
//
// Arguments are (envs, pixels): pixels = 1 renders 128x72 RGB every step.

#include <benchmark/benchmark.h>

#include "hasard/env/vector_env.hpp"

using namespace hasard;
using namespace hasard::env;

namespace {

template <bool Parallel>
void BM_VectorStep(benchmark::State& state) {
  EnvSpec spec;
  spec.scenario = ScenarioId::DetonatorsDilemma;
  spec.auto_reset = true;
  spec.seed = 1;
  if (state.range(1)) spec.obs = ObsMode::Pixels;
  auto envs = make_envs(spec, static_cast<int>(state.range(0)));
  Rng rng(2);
  const auto n = static_cast<std::uint64_t>(envs.front().actions().size());
  std::vector<int> actions(envs.size());
  for (auto _ : state) {
    for (auto& a : actions) a = static_cast<int>(rng.uniform_int(n));
    auto out = Parallel ? vector_step(envs, actions) : vector_step_serial(envs, actions);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void Args(benchmark::internal::Benchmark* b) {
  for (int pixels : {0, 1})
    for (int n : {1, 8, 32}) b->Args({n, pixels});
  b->ArgNames({"envs", "pixels"});
}

}  // namespace

BENCHMARK(BM_VectorStep<false>)->Name("vector_step_serial")->Apply(Args);
BENCHMARK(BM_VectorStep<true>)->Name("vector_step_omp")->Apply(Args);

BENCHMARK_MAIN();
