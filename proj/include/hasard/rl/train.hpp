#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hasard/env/env.hpp"
#include "hasard/env/heatmap.hpp"
#include "hasard/rl/algorithms.hpp"
#include "hasard/rl/policy.hpp"
#include "hasard/rl/ppo_loss.hpp"

namespace hasard::rl {

enum class Method { PPO, PPOCost, PPOLag, PPOPID };

std::string_view method_name(Method m);
/// Accepts ppo, ppocost, ppolag, ppopid (case-insensitive).
std::optional<Method> method_from_name(std::string_view name);
inline constexpr std::string_view kMethodNames = "ppo, ppocost, ppolag, ppopid";

struct TrainConfig {
  Method method = Method::PPOLag;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  LossCoeffs loss;  // clip 0.1, value clip 1.0, value 0.5, entropy 0.001
  double lr = 1e-4;
  int num_envs = 32;
  int rollout = 32;     // batch = num_envs * rollout = 1024
  int minibatch = 1024;
  int epochs = 1;
  double max_grad_norm = 4.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-6;
  double kl_threshold = 0.01;
  std::vector<int> hidden{512, 512};
  double init_gain = 1.0;
  // safety
  double kappa = 1.0;          // PPOCost cost scale
  double lambda_init = 0.0;    // PPOLag lambda_0
  double lambda_rate = 1e-2;   // PPOLag step size
  double pid_kp = 0.1;
  double pid_ki = 0.01;
  double pid_kd = 0.01;
  bool normalize_combined = true;  // divide the combined advantage by (1 + lambda)
  int cost_window = 32;            // episodes in the J_c estimate
  int log_window = 100;            // episodes in the logged rolling means
  int log_every = 1;               // iterations between log rows
  std::uint64_t seed = 1;

  int batch_size() const { return num_envs * rollout; }
  /// Throws ConfigError.
  void validate() const;
  void set(std::string_view key, std::string_view value);
  std::string serialize() const;
};

struct TrainLogRow {
  std::int64_t step = 0;
  double mean_return = 0.0;
  double mean_cost = 0.0;
  double lambda = 0.0;
  double pi_loss = 0.0;
  double v_loss = 0.0;
  double vc_loss = 0.0;
  double entropy = 0.0;
  double kl = 0.0;
};

struct TrainLog {
  std::vector<TrainLogRow> rows;
  /// (row index, text) markers, e.g. curriculum level transitions.
  std::vector<std::pair<std::size_t, std::string>> markers;

  static constexpr std::string_view kHeader = "step,return,cost,lambda,pi_loss,v_loss,vc_loss,entropy,kl";
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/// Adam with bias correction.
struct Adam {
  Eigen::VectorXf m;
  Eigen::VectorXf v;
  std::int64_t t = 0;

  void reset(Eigen::Index n) {
    m = Eigen::VectorXf::Zero(n);
    v = Eigen::VectorXf::Zero(n);
    t = 0;
  }
  void step(Eigen::VectorXf& params, const Eigen::VectorXf& grad, double lr, double b1, double b2, double eps);
};

/// Greedy (argmax) per-group action indices for one observation.
std::vector<int> greedy_action(const Policy<float>& policy, std::span<const float> obs);

/// Samples per-group indices; returns the joint log-probability.
double sample_action(const Policy<float>& policy, const Eigen::VectorXf& logits, Rng& rng, std::vector<int>& out);

/// Owns policy, optimiser and multiplier state; can train across several env
/// specs in sequence (curriculum) carrying all state.
class Trainer {
public:
  Trainer(TrainConfig cfg, PolicyShape shape);

  /// Collects and learns from at least `steps` env steps (whole iterations).
  void run(const env::EnvSpec& spec, std::int64_t steps, TrainLog& log);

  /// Called with every log row as it is produced.
  void set_progress(std::function<void(const TrainLogRow&)> fn) { progress_ = std::move(fn); }

  const TrainConfig& config() const { return cfg_; }
  Policy<float>& policy() { return policy_; }
  const Policy<float>& policy() const { return policy_; }
  const Adam& adam() const { return adam_; }
  double lambda() const { return lambda_; }
  const PidState& pid() const { return pid_; }
  std::int64_t global_step() const { return global_step_; }
  const Rng& rng() const { return rng_; }
  const env::Heatmap& heatmap() const { return heatmap_; }

  /// Digest of the parameter vector.
  std::uint64_t params_hash() const;
  /// Hash of the parameters used for the first rollout of the latest run().
  std::uint64_t first_rollout_hash() const { return first_rollout_hash_; }

  void save(std::ostream& out) const;
  /// Throws ShapeMismatch / ConfigError on a bad file.
  static Trainer load(std::istream& in, TrainConfig cfg);

private:
  void update_multiplier(double xi);
  LossStats learn(const LossBatch<float>& batch, bool& stop);

  TrainConfig cfg_;
  Policy<float> policy_;
  Adam adam_;
  Rng rng_;
  double lambda_ = 0.0;
  PidState pid_;
  std::int64_t global_step_ = 0;
  std::deque<double> recent_returns_;
  std::deque<double> recent_costs_;
  std::deque<double> cost_window_;
  env::Heatmap heatmap_;
  std::uint64_t first_rollout_hash_ = 0;
  std::function<void(const TrainLogRow&)> progress_;
};

struct TrainResult {
  TrainLog log;
  std::unique_ptr<Trainer> trainer;
};

/// Builds a policy for `spec` and trains for `total_steps`.
TrainResult train(const env::EnvSpec& spec, const TrainConfig& cfg, std::int64_t total_steps);

PolicyShape policy_shape_for(const env::EnvSpec& spec, const std::vector<int>& hidden);

}  // namespace hasard::rl
