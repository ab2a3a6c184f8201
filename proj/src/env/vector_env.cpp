#include "hasard/env/vector_env.hpp"

#include <string>

#include "hasard/core/errors.hpp"

namespace hasard::env {

namespace {

SlotResult step_slot(Env& env, int action) {
  SlotResult s;
  try {
    s.result = env.step(action);
  } catch (const std::exception& e) {
    s.error = e.what();
    s.exception = std::current_exception();
  }
  return s;
}

void check_sizes(std::span<Env> envs, std::span<const int> actions) {
  if (envs.size() != actions.size())
    throw ShapeMismatch("vector_step: " + std::to_string(envs.size()) + " envs, " + std::to_string(actions.size()) +
                        " actions");
}

}  // namespace

std::vector<SlotResult> vector_step(std::span<Env> envs, std::span<const int> actions) {
  check_sizes(envs, actions);
  std::vector<SlotResult> out(envs.size());
  const auto n = static_cast<std::ptrdiff_t>(envs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = step_slot(envs[static_cast<std::size_t>(i)], actions[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<SlotResult> vector_step_serial(std::span<Env> envs, std::span<const int> actions) {
  check_sizes(envs, actions);
  std::vector<SlotResult> out(envs.size());
  for (std::size_t i = 0; i < envs.size(); ++i) out[i] = step_slot(envs[i], actions[i]);
  return out;
}

std::vector<Env> make_envs(const EnvSpec& spec, int n) {
  std::vector<Env> envs;
  envs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    EnvSpec s = spec;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
    envs.emplace_back(s);
    envs.back().reset();
  }
  return envs;
}

}  // namespace hasard::env
