#include <cmath>
#include <ostream>

#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"

namespace hasard::cli {

EvalSummary summarize(std::vector<EvalEpisode> episodes, double budget) {
  EvalSummary s;
  s.episodes = std::move(episodes);
  s.budget = budget;
  const double n = static_cast<double>(s.episodes.size());
  if (n == 0) {
    s.satisfies = true;
    return s;
  }
  for (const auto& e : s.episodes) {
    s.mean_return += e.episode_return;
    s.mean_cost += e.episode_cost;
  }
  s.mean_return /= n;
  s.mean_cost /= n;
  for (const auto& e : s.episodes) {
    s.std_return += (e.episode_return - s.mean_return) * (e.episode_return - s.mean_return);
    s.std_cost += (e.episode_cost - s.mean_cost) * (e.episode_cost - s.mean_cost);
  }
  s.std_return = std::sqrt(s.std_return / n);
  s.std_cost = std::sqrt(s.std_cost / n);
  s.satisfies = s.mean_cost <= budget;
  return s;
}

EvalSummary evaluate(env::EnvSpec spec, int episodes, const ActionPolicy& policy) {
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
  spec.auto_reset = false;
  env::Env env(spec);
  std::vector<EvalEpisode> rows;
  for (int i = 0; i < episodes; ++i) {
    env.reset();
    while (!env.done()) env.step(policy(env));
    rows.push_back({env.episode_return(), env.episode_cost(), env.step_count(), env.violated()});
  }
  return summarize(std::move(rows), env.budget());
}

std::optional<ActionPolicy> scripted_policy(std::string_view name, std::uint64_t seed) {
  if (name == "noop") {
    return ActionPolicy([](const env::Env& env) { return std::vector<int>(env.actions().group_count(), 0); });
  }
  if (name == "safe") {
    return ActionPolicy([](const env::Env& env) {
      const auto held = held_buttons(env.scenario().safe_action(env.world()));
      return env.actions().from_buttons(held);
    });
  }
  if (name == "random") {
    auto rng = std::make_shared<Rng>(seed);
    return ActionPolicy([rng](const env::Env& env) {
      std::vector<int> out;
      for (int n : env.actions().group_sizes()) out.push_back(static_cast<int>(rng->uniform_int(static_cast<std::uint64_t>(n))));
      return out;
    });
  }
  return std::nullopt;
}

ActionPolicy greedy_policy(std::shared_ptr<const rl::Policy<float>> policy) {
  return [policy](const env::Env& env) {
    if (env.actions().group_sizes() != policy->shape().group_sizes || env.feature_size() != policy->shape().obs_dim)
      throw ShapeMismatch("checkpoint does not match " + env.spec().env_id() + " (obs " +
                          std::to_string(env.feature_size()) + " vs " + std::to_string(policy->shape().obs_dim) + ")");
    const auto f = env.features();
    return rl::greedy_action(*policy, f);
  };
}

void write_eval_csv(std::ostream& out, const EvalSummary& s) {
  out << "episode,return,cost,steps,violation\n";
  for (std::size_t i = 0; i < s.episodes.size(); ++i) {
    const auto& e = s.episodes[i];
    out << i << ',' << e.episode_return << ',' << e.episode_cost << ',' << e.steps << ',' << (e.violation ? 1 : 0)
        << '\n';
  }
  out << "# mean_return,std_return,mean_cost,std_cost,budget,satisfies\n";
  out << "# " << s.mean_return << ',' << s.std_return << ',' << s.mean_cost << ',' << s.std_cost << ',' << s.budget
      << ',' << (s.satisfies ? "true" : "false") << '\n';
}

}  // namespace hasard::cli
