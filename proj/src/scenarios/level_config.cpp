#include "hasard/scenarios/level_config.hpp"

#include <charconv>

#include "hasard/core/errors.hpp"

namespace hasard::scenarios {

namespace {
constexpr std::string_view kNames[] = {"armament_burden",  "remedy_rush",      "collateral_damage",
                                       "volcanic_venture", "precipice_plunge", "detonators_dilemma"};
}

std::string_view scenario_name(ScenarioId id) { return kNames[static_cast<int>(id)]; }

std::optional<ScenarioId> scenario_from_name(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kNames[i] == name) return static_cast<ScenarioId>(i);
  return std::nullopt;
}

LevelConfig level_config(ScenarioId id, int level) {
  if (level < 1 || level > 3) throw ConfigError("level must be 1, 2 or 3, got " + std::to_string(level));
  const int i = level - 1;
  switch (id) {
    case ScenarioId::ArmamentBurden: {
      constexpr ArmamentLevel t[] = {{false, false, false, false},
                                     {true, true, false, false},
                                     {true, true, true, true}};
      return {id, level, t[i]};
    }
    case ScenarioId::RemedyRush: {
      const RemedyLevel t[] = {{30, 40, std::nullopt, std::nullopt}, {20, 60, 20, 2}, {10, 80, 40, 1}};
      return {id, level, t[i]};
    }
    case ScenarioId::CollateralDamage: {
      constexpr CollateralLevel t[] = {{4, 10, 4, 60, 256, 456}, {3, 15, 5, 40, 400, 600}, {2, 20, 6, 20, 544, 744}};
      return {id, level, t[i]};
    }
    case ScenarioId::VolcanicVenture: {
      constexpr VolcanicLevel t[] = {{60, false, false, false}, {70, true, true, false}, {80, true, true, true}};
      return {id, level, t[i]};
    }
    case ScenarioId::PrecipicePlunge: {
      constexpr PrecipiceLevel t[] = {{24, 30, false, false}, {128, 30, true, false}, {192, 50, true, true}};
      return {id, level, t[i]};
    }
    case ScenarioId::DetonatorsDilemma: {
      constexpr DetonatorLevel t[] = {{3, 8, 10}, {5, 12, 15}, {7, 16, 20}};
      return {id, level, t[i]};
    }
  }
  throw ConfigError("unknown scenario");
}

EnvId parse_env_id(std::string_view id) {
  const auto dash = id.rfind('-');
  if (dash == std::string_view::npos) throw ConfigError("env id must look like <scenario>-<level>: " + std::string(id));
  const auto scenario = scenario_from_name(id.substr(0, dash));
  if (!scenario) throw ConfigError("unknown scenario '" + std::string(id.substr(0, dash)) + "'");
  int level = 0;
  const auto rest = id.substr(dash + 1);
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), level);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || level < 1 || level > 3)
    throw ConfigError("bad level in env id '" + std::string(id) + "'");
  return {*scenario, level};
}

std::string env_id_string(ScenarioId id, int level) {
  return std::string(scenario_name(id)) + "-" + std::to_string(level);
}

}  // namespace hasard::scenarios
