#include "hasard/rl/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "hasard/core/errors.hpp"

namespace hasard::rl {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, std::span<const bool> dones,
                      double gamma, double lambda) {
  const std::size_t t_len = rewards.size();
  if (values.size() != t_len + 1 || dones.size() != t_len)
    throw ShapeMismatch("compute_gae: need T rewards, T dones and T + 1 values");
  GaeResult out;
  out.advantages.assign(t_len, 0.0);
  out.returns.assign(t_len, 0.0);
  double next = 0.0;
  for (std::size_t k = t_len; k-- > 0;) {
    const double notdone = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * values[k + 1] * notdone - values[k];
    next = delta + gamma * lambda * notdone * next;
    out.advantages[k] = next;
    out.returns[k] = next + values[k];
  }
  return out;
}

void compute_gae(std::span<const float> rewards, std::span<const float> values, std::span<const float> dones,
                 double gamma, double lambda, std::span<float> advantages, std::span<float> returns) {
  const std::size_t t_len = rewards.size();
  double next = 0.0;
  for (std::size_t k = t_len; k-- > 0;) {
    const double notdone = 1.0 - dones[k];
    const double delta = rewards[k] + gamma * values[k + 1] * notdone - values[k];
    next = delta + gamma * lambda * notdone * next;
    advantages[k] = static_cast<float>(next);
    returns[k] = static_cast<float>(next + values[k]);
  }
}

LagrangeState lagrange_update(LagrangeState state, double jc, double xi, double rate) {
  state.lambda = std::max(0.0, state.lambda + rate * (jc - xi));
  return state;
}

PidOutput pid_update(PidState s, double jc, double xi) {
  const double e = jc - xi;
  s.integral = std::max(0.0, s.integral + e);
  const double derivative = s.has_prev ? std::max(0.0, jc - s.prev_jc) : 0.0;
  PidOutput out;
  out.lambda = std::max(0.0, s.kp * e + s.ki * s.integral + s.kd * derivative);
  s.prev_jc = jc;
  s.has_prev = true;
  out.state = s;
  return out;
}

std::vector<float> combine_advantages(std::span<const float> ar, std::span<const float> ac, double lambda,
                                      bool normalize_by_lambda) {
  if (ar.size() != ac.size()) throw ShapeMismatch("combine_advantages: length mismatch");
  std::vector<float> out(ar.size());
  const double denom = normalize_by_lambda ? 1.0 + lambda : 1.0;
  for (std::size_t i = 0; i < ar.size(); ++i) out[i] = static_cast<float>((ar[i] - lambda * ac[i]) / denom);
  return out;
}

void normalize_in_place(std::span<float> x) {
  if (x.empty()) return;
  double mean = 0.0;
  for (float v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (float v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double sd = std::sqrt(var);
  for (float& v : x) v = static_cast<float>(sd > 1e-8 ? (v - mean) / (sd + 1e-8) : 0.0);
}

}  // namespace hasard::rl
