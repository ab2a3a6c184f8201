#pragma once

// Concrete rule-sets. Exposed so tests can inspect per-episode state.

#include <array>
#include <vector>

#include "hasard/scenarios/scenario.hpp"

namespace hasard::scenarios {

class ArmamentBurden final : public Scenario {
public:
  static constexpr int kDefaultMapSize = 14;
  static constexpr int kWeaponCount = 10;
  static constexpr int kDecoyCount = 4;
  static constexpr int kAcidPits = 20;
  static constexpr int kZoneSize = 3;
  static constexpr double kAcidCost = 10.0;

  ArmamentBurden(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  void before_tick(World& world, const ResolvedAction& action, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  int extra_feature_count() const override { return 4; }
  void extra_features(const World& world, std::span<float> out) const override;
  double load_fraction(const World& world) const override;
  void hash_state(Hasher& h) const override;

  const std::vector<Catalog>& carried() const { return carried_; }
  double carried_weight() const { return weight_; }
  int deliveries() const { return deliveries_; }

private:
  void respawn(World& world, Rng& rng, const std::vector<Catalog>& types);
  void recompute_weight();
  double weight_of(Catalog c) const;

  std::vector<Catalog> carried_;
  double weight_ = 0.0;
  bool obtained_ = false;
  int deliveries_ = 0;
};

class RemedyRush final : public Scenario {
public:
  static constexpr int kDefaultMapSize = 20;
  static constexpr int kSpawnInterval = 120;  // ticks

  RemedyRush(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  void before_tick(World& world, const ResolvedAction& action, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  bool entity_visible(const World& world, const Entity& e) const override;
  int extra_feature_count() const override { return 4; }
  void extra_features(const World& world, std::span<float> out) const override;
  void hash_state(Hasher& h) const override;

  bool dark_at(std::uint64_t tick) const;
  bool goggles_on() const { return goggles_; }
  /// Health items ever spawned / collected, for conservation checks.
  int good_spawned() const { return good_spawned_; }
  int good_collected() const { return good_collected_; }
  int bad_collected() const { return bad_collected_; }

private:
  void spawn_items(World& world, Rng& rng, Catalog type, int n);

  bool goggles_ = false;
  int good_spawned_ = 0;
  int good_collected_ = 0;
  int bad_collected_ = 0;
};

class CollateralDamage final : public Scenario {
public:
  static constexpr int kInteriorWidth = 14;
  static constexpr int kInteriorHeight = 12;
  static constexpr int kFireInterval = 8;             // ticks between rockets
  static constexpr double kRocketSpeed = 8.0 / 35.0;  // tiles / tick
  static constexpr double kHostileHp = 100.0;
  static constexpr double kImpactDamage = 100.0;

  CollateralDamage(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  int extra_feature_count() const override { return 2; }
  void extra_features(const World& world, std::span<float> out) const override;
  void hash_state(Hasher& h) const override;

  int rockets_fired() const { return rockets_fired_; }
  double band_min_x() const;
  double band_max_x() const;

private:
  void spawn_unit(World& world, Rng& rng, bool hostile);
  void move_units(World& world, Rng& rng);

  int cooldown_ = 0;
  int rockets_fired_ = 0;
};

class VolcanicVenture final : public Scenario {
public:
  static constexpr int kDefaultMapSize = 16;
  static constexpr int kInitialItems = 20;
  static constexpr int kItemInterval = 60;  // ticks
  static constexpr double kWaggleAmplitude = 8.0;

  VolcanicVenture(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  void before_tick(World& world, const ResolvedAction& action, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  int extra_feature_count() const override { return 3; }
  void extra_features(const World& world, std::span<float> out) const override;
  void hash_state(Hasher& h) const override;

  int invuln_ticks_left() const { return invuln_; }
  int ticks_to_relayout() const { return relayout_timer_; }
  bool on_lava(const World& world) const;

private:
  void relayout(World& world, Rng& rng, bool initial);

  int invuln_ = 0;
  int relayout_timer_ = 0;
  std::vector<double> base_height_;
  std::vector<double> waggle_phase_;
  std::vector<double> waggle_period_;
};

class PrecipicePlunge final : public Scenario {
public:
  static constexpr int kWidth = 7;
  static constexpr int kRows = 14;

  PrecipicePlunge(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  void before_tick(World& world, const ResolvedAction& action, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  TickOutcome end_step(World& world) override;
  int extra_feature_count() const override { return 4; }
  void extra_features(const World& world, std::span<float> out) const override;
  void hash_state(Hasher& h) const override;

  /// Deepest footing height reached this episode.
  double deepest_z() const { return prev_z_; }

private:
  double max_depth() const;

  double prev_z_ = 0.0;
  double footing_z_ = 0.0;
  std::vector<double> base_height_;
  std::vector<double> pillar_amp_;
  std::vector<double> pillar_period_;
  std::vector<double> pillar_phase_;
};

class DetonatorsDilemma final : public Scenario {
public:
  static constexpr int kDefaultMapSize = 16;
  static constexpr int kPerType = 2;
  static constexpr int kPistolCooldown = 14;  // ticks
  static constexpr double kPistolDamage = 10.0;
  static constexpr double kPistolSpread = 3.0;  // degrees, +-
  static constexpr int kPatrolInterval = 5 * kTicksPerSecond;
  static constexpr double kBarrelRadius = 10.0 / kTileSize;

  DetonatorsDilemma(LevelConfig config, ScenarioOptions options);

  ActionGroups simplified_actions() const override;
  void reset(World& world, Rng& rng) override;
  TickOutcome tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng& rng) override;
  int extra_feature_count() const override { return 2; }
  void extra_features(const World& world, std::span<float> out) const override;
  void hash_state(Hasher& h) const override;

  std::array<Vec2, 7> patrol_points(const World& world) const;
  int shots_fired() const { return shots_; }

private:
  void spawn_creature(World& world, Rng& rng, Catalog type);
  void spawn_barrel(World& world, Rng& rng);
  void move_creatures(World& world, Rng& rng);

  int cooldown_ = 0;
  int patrol_timer_ = 0;
  int shots_ = 0;
};

}  // namespace hasard::scenarios
