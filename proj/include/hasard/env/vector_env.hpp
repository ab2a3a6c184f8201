#pragma once

#include <exception>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hasard/env/env.hpp"

namespace hasard::env {

/// Outcome of one slot in a batched step. Exactly one of `result` / `error`
/// is set.
struct SlotResult {
  std::optional<StepResult> result;
  std::string error;
  std::exception_ptr exception;  // original exception, for rethrow

  bool ok() const { return result.has_value(); }
  /// Rethrows the slot's exception; no-op when ok().
  void rethrow() const {
    if (exception) std::rethrow_exception(exception);
  }
};

/// Steps every env with its action, fanned out over OpenMP threads.
std::vector<SlotResult> vector_step(std::span<Env> envs, std::span<const int> actions);

/// Reference implementation: same contract, one env after another.
std::vector<SlotResult> vector_step_serial(std::span<Env> envs, std::span<const int> actions);

/// n envs sharing `spec`, env i seeded with derive_seed(spec.seed, i) and
/// already reset.
std::vector<Env> make_envs(const EnvSpec& spec, int n);

}  // namespace hasard::env
