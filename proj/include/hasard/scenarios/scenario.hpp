#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hasard/core/buttons.hpp"
#include "hasard/core/hash.hpp"
#include "hasard/core/render.hpp"
#include "hasard/core/world.hpp"
#include "hasard/scenarios/level_config.hpp"
#include "hasard/scenarios/rules.hpp"

namespace hasard::scenarios {

inline constexpr double kPickupRadius = 0.5;      // tiles, centre to centre
inline constexpr double kPickupClearance = 16.0;  // jumping this high above an item skips it

struct ScenarioOptions {
  ConstraintMode mode = ConstraintMode::Soft;
  int map_size = 0;         // interior edge in tiles; 0 = scenario default
  double capacity = 1.0;    // Armament Burden carrying capacity
  bool table_weights = false;
  double pickup_reward = 0.0;  // Armament Burden: fraction of r_i paid on pickup
};

struct TickOutcome {
  double reward = 0.0;
  double cost = 0.0;
  bool done = false;

  TickOutcome& operator+=(const TickOutcome& o) {
    reward += o.reward;
    cost += o.cost;
    done = done || o.done;
    return *this;
  }
};

using ActionGroups = std::vector<std::vector<Button>>;

/// One rule-set. Owns the per-episode scenario state; the World it acts on
/// is owned by the environment.
class Scenario {
public:
  Scenario(LevelConfig config, ScenarioOptions options) : config_(std::move(config)), options_(options) {}
  virtual ~Scenario() = default;
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  ScenarioId id() const { return config_.scenario; }
  int level() const { return config_.level; }
  const LevelConfig& config() const { return config_; }
  const ScenarioOptions& options() const { return options_; }
  bool hard() const { return options_.mode == ConstraintMode::Hard; }

  /// Simplified action groups; index 0 of every group is NO-OP.
  virtual ActionGroups simplified_actions() const = 0;

  /// Builds the level into `world`. Draw order from `rng` is fixed per scenario.
  virtual void reset(World& world, Rng& rng) = 0;
  virtual void before_tick(World& world, const ResolvedAction& action, Rng& rng) {}
  virtual TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) = 0;
  /// Called once after the frame-skipped ticks of an env step.
  virtual TickOutcome end_step(World& world) { return {}; }

  virtual bool entity_visible(const World& world, const Entity& e) const { return true; }
  virtual int extra_feature_count() const { return 0; }
  virtual void extra_features(const World& world, std::span<float> out) const {}
  /// Fraction of carrying capacity in use, for the HUD.
  virtual double load_fraction(const World& world) const { return 0.0; }

  virtual void hash_state(Hasher& h) const = 0;

  /// A scripted action that never incurs cost at this level.
  virtual ResolvedAction safe_action(const World& world) const { return {}; }

protected:
  LevelConfig config_;
  ScenarioOptions options_;
};

std::unique_ptr<Scenario> make_scenario(const LevelConfig& config, const ScenarioOptions& options);

/// True when the agent stands on (not over) the item and close enough.
bool agent_touches(const World& world, const Entity& e);

/// Predicate for spawn tiles: interior, not a wall, not occupied by a live
/// entity, not the agent's tile, and accepted by `extra` when given.
TilePredicate free_tile(const World& world, TilePredicate extra = {});

}  // namespace hasard::scenarios
