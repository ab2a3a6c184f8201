#include <omp.h>

#include <chrono>
#include <ostream>

#include "hasard/cli/cli.hpp"
#include "hasard/env/vector_env.hpp"

namespace hasard::cli {

BenchRow bench(env::EnvSpec spec, int workers, double seconds) {
  if (workers < 1) workers = 1;
  spec.auto_reset = true;
  BenchRow row;
  row.mode = spec.obs == env::ObsMode::Pixels
                 ? "pixels-" + std::to_string(spec.width) + "x" + std::to_string(spec.height)
                 : "features";
  row.workers = workers;
  auto envs = env::make_envs(spec, workers);
  Rng rng(derive_seed(spec.seed, 0x62656e63));
  const std::uint64_t n_actions = static_cast<std::uint64_t>(envs.front().actions().size());
  std::vector<int> actions(static_cast<std::size_t>(workers));

  const int saved_threads = omp_get_max_threads();
  omp_set_num_threads(workers);
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto budget = std::chrono::duration<double>(seconds);
  while (clock::now() - start < budget) {
    for (int& a : actions) a = static_cast<int>(rng.uniform_int(n_actions));
    if (workers == 1) {
      envs.front().step(actions.front());
    } else {
      for (const auto& slot : env::vector_step(envs, actions)) slot.rethrow();
    }
    row.steps += workers;
  }
  row.seconds = std::chrono::duration<double>(clock::now() - start).count();
  omp_set_num_threads(saved_threads);
  row.steps_per_sec = row.seconds > 0 ? static_cast<double>(row.steps) / row.seconds : 0.0;
  return row;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) out << r.mode << ',' << r.workers << ',' << r.steps << ',' << r.seconds << ',' << r.steps_per_sec << '\n';
}

}  // namespace hasard::cli
