#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace hasard::scenarios {

enum class ScenarioId {
  ArmamentBurden,
  RemedyRush,
  CollateralDamage,
  VolcanicVenture,
  PrecipicePlunge,
  DetonatorsDilemma,
};

inline constexpr ScenarioId kAllScenarios[] = {
    ScenarioId::ArmamentBurden,   ScenarioId::RemedyRush,      ScenarioId::CollateralDamage,
    ScenarioId::VolcanicVenture,  ScenarioId::PrecipicePlunge, ScenarioId::DetonatorsDilemma,
};

std::string_view scenario_name(ScenarioId id);
std::optional<ScenarioId> scenario_from_name(std::string_view name);

struct ArmamentLevel {
  bool complex_terrain;
  bool obstacles;
  bool pitfalls;
  bool decoy_items;
  friend bool operator==(const ArmamentLevel&, const ArmamentLevel&) = default;
};

struct RemedyLevel {
  int health_vials;
  int hazardous_items;
  std::optional<int> darkness_duration;     // env steps; nullopt = N/A
  std::optional<int> night_vision_goggles;  // nullopt = N/A
  friend bool operator==(const RemedyLevel&, const RemedyLevel&) = default;
};

struct CollateralLevel {
  int hostile_targets;
  int target_speed;
  int neutral_units;
  int neutral_health;
  int distance_min;  // world units
  int distance_max;
  friend bool operator==(const CollateralLevel&, const CollateralLevel&) = default;
};

struct VolcanicLevel {
  int lava_coverage_percent;
  bool changing_platforms;
  bool random_platform_height;
  bool platform_waggle;
  friend bool operator==(const VolcanicLevel&, const VolcanicLevel&) = default;
};

struct PrecipiceLevel {
  int step_decrement;
  int darkness_fluctuation;
  bool randomized_terrain;
  bool moving_pillars;
  friend bool operator==(const PrecipiceLevel&, const PrecipiceLevel&) = default;
};

struct DetonatorLevel {
  int creature_types;
  int creature_speed;
  int explosive_barrels;
  friend bool operator==(const DetonatorLevel&, const DetonatorLevel&) = default;
};

using LevelAttributes = std::variant<ArmamentLevel, RemedyLevel, CollateralLevel, VolcanicLevel,
                                     PrecipiceLevel, DetonatorLevel>;

struct LevelConfig {
  ScenarioId scenario;
  int level;
  LevelAttributes attributes;

  template <class T>
  const T& get() const {
    return std::get<T>(attributes);
  }
};

/// The difficulty attribute table. Throws ConfigError for level outside 1..3.
LevelConfig level_config(ScenarioId id, int level);

struct EnvId {
  ScenarioId scenario;
  int level;
};

/// Parses "remedy_rush-2" style ids. Throws ConfigError.
EnvId parse_env_id(std::string_view id);
std::string env_id_string(ScenarioId id, int level);

}  // namespace hasard::scenarios
