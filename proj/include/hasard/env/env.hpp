#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hasard/core/render.hpp"
#include "hasard/core/world.hpp"
#include "hasard/env/action_encoding.hpp"
#include "hasard/env/heatmap.hpp"
#include "hasard/scenarios/scenario.hpp"

namespace hasard::env {

using scenarios::ConstraintMode;
using scenarios::EnvId;
using scenarios::ScenarioId;
using scenarios::env_id_string;
using scenarios::parse_env_id;
using scenarios::scenario_from_name;
using scenarios::scenario_name;
using scenarios::level_config;

enum class ObsMode { Features, Pixels };
enum class ActionMode { Simplified, FullDiscrete };

inline constexpr int kDefaultMaxSteps = 2100;

struct PixelChannels {
  bool rgb = true;
  bool depth = false;
  bool labels = false;
  friend bool operator==(const PixelChannels&, const PixelChannels&) = default;
};

/// Everything needed to construct an environment. Serialises to a flat
/// `key=value` text, one pair per line.
struct EnvSpec {
  ScenarioId scenario = ScenarioId::RemedyRush;
  int level = 1;
  ConstraintMode constraint = ConstraintMode::Soft;
  std::optional<double> budget;  // unset = default_budget()
  ObsMode obs = ObsMode::Features;
  int width = 128;
  int height = 72;
  PixelChannels channels;
  bool hud = true;
  ActionMode action = ActionMode::Simplified;
  int max_steps = kDefaultMaxSteps;
  std::uint64_t seed = 0;
  bool auto_reset = false;
  // scenario options
  int map_size = 0;
  double capacity = 1.0;
  bool table_weights = false;
  double pickup_reward = 0.0;

  /// Sets one key; throws ConfigError on unknown key or bad value.
  void set(std::string_view key, std::string_view value);
  /// Parses `key=value` lines ('#' starts a comment). Throws ConfigError.
  static EnvSpec parse(std::string_view text);
  std::string serialize() const;
  /// Checks cross-field invariants. Throws ConfigError.
  void validate() const;

  double effective_budget() const;
  std::string env_id() const { return env_id_string(scenario, level); }
  scenarios::ScenarioOptions scenario_options() const;

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

/// Default safety budget; 0 in hard mode.
double default_budget(ScenarioId scenario, int level, ConstraintMode mode = ConstraintMode::Soft);

struct Observation {
  std::vector<float> features;  // ObsMode::Features
  FrameSet frame;               // ObsMode::Pixels

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepInfo {
  double episode_return = 0.0;
  double episode_cost = 0.0;
  bool violation = false;
  int step = 0;
  bool auto_reset = false;  // obs already belongs to a fresh episode
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  double cost = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;

  bool done() const { return terminated || truncated; }
};

/// Feature-vector geometry.
inline constexpr int kCommonFeatures = 9;
inline constexpr int kRayCount = 5;
inline constexpr int kPatchRadius = 2;
inline constexpr int kPatchChannels = 3;
inline constexpr int kPatchFeatures = (2 * kPatchRadius + 1) * (2 * kPatchRadius + 1) * kPatchChannels;
inline constexpr int kEntitySlots = 8;
inline constexpr int kEntitySlotWidth = 4 + kRoleCount + 1;
inline constexpr int kEntityFeatures = kEntitySlots * kEntitySlotWidth;
inline constexpr int kEntityOffset = kCommonFeatures + kRayCount + kPatchFeatures;
inline constexpr double kFeatureDistanceScale = 1024.0;  // world units

int feature_size(const scenarios::Scenario& scenario);

/// Fills `out` (length feature_size) from the world state.
void feature_observation(const World& world, const scenarios::Scenario& scenario, std::span<float> out);

class Env {
public:
  explicit Env(EnvSpec spec);
  Env(Env&&) noexcept;
  Env& operator=(Env&&) noexcept;
  ~Env();

  /// Starts an episode. Without a seed, the n-th episode uses
  /// derive_seed(spec.seed, n).
  Observation reset(std::optional<std::uint64_t> seed = std::nullopt);
  StepResult step(int flat_action);
  StepResult step(std::span<const int> group_indices);

  Observation observe() const;
  std::vector<float> features() const;
  FrameSet render(int width, int height, bool hud = true) const;

  const EnvSpec& spec() const { return spec_; }
  const ActionEncoding& actions() const { return actions_; }
  const World& world() const { return world_; }
  World& mutable_world() { return world_; }
  const scenarios::Scenario& scenario() const { return *scenario_; }
  scenarios::Scenario& mutable_scenario() { return *scenario_; }
  Heatmap& heatmap() { return heatmap_; }
  const Heatmap& heatmap() const { return heatmap_; }

  bool started() const { return started_; }
  bool done() const { return done_; }
  int step_count() const { return steps_; }
  double episode_return() const { return episode_return_; }
  double episode_cost() const { return episode_cost_; }
  bool violated() const { return violation_; }
  double budget() const { return budget_; }
  std::uint64_t episode_seed() const { return episode_seed_; }
  std::uint64_t episodes_started() const { return episodes_started_; }
  int feature_size() const;

  /// Digest of the full simulation state (world, scenario, rng, counters).
  std::uint64_t state_hash() const;

private:
  HudValues hud_values() const;

  EnvSpec spec_;
  ActionEncoding actions_;
  std::unique_ptr<scenarios::Scenario> scenario_;
  World world_;
  Rng rng_;
  Heatmap heatmap_;
  double budget_ = 0.0;
  bool started_ = false;
  bool done_ = false;
  bool violation_ = false;
  int steps_ = 0;
  double episode_return_ = 0.0;
  double episode_cost_ = 0.0;
  std::uint64_t episode_seed_ = 0;
  std::uint64_t episodes_started_ = 0;
};

}  // namespace hasard::env
