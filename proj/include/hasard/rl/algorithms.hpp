#pragma once

#include <span>
#include <vector>

namespace hasard::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t,
/// A_t = delta_t + gamma lambda (1 - done_t) A_{t+1}, returns = A + V.
/// `values` has T + 1 entries (the last is the bootstrap value).
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, std::span<const bool> dones,
                      double gamma, double lambda);

/// In-place float variant used by the trainer; same recursion.
void compute_gae(std::span<const float> rewards, std::span<const float> values, std::span<const float> bootstrap_done,
                 double gamma, double lambda, std::span<float> advantages, std::span<float> returns);

struct LagrangeState {
  double lambda = 0.0;
};

/// lambda' = max(0, lambda + rate (J_c - xi)).
LagrangeState lagrange_update(LagrangeState state, double jc, double xi, double rate);

struct PidState {
  double kp = 0.1;
  double ki = 0.01;
  double kd = 0.01;
  double integral = 0.0;
  double prev_jc = 0.0;
  bool has_prev = false;
};

struct PidOutput {
  PidState state;
  double lambda = 0.0;
};

/// e = J_c - xi, I' = max(0, I + e),
/// lambda = max(0, kp e + ki I' + kd max(0, J_c - prev_J_c)).
PidOutput pid_update(PidState state, double jc, double xi);

inline double shape_cost_reward(double r, double c, double kappa) { return r - kappa * c; }

/// (A_r - lambda A_c) / (1 + lambda), or without the denominator.
std::vector<float> combine_advantages(std::span<const float> adv_reward, std::span<const float> adv_cost,
                                      double lambda, bool normalize_by_lambda);

/// Shifts to zero mean and scales to unit (population) std; leaves
/// constant arrays at zero.
void normalize_in_place(std::span<float> x);

}  // namespace hasard::rl
