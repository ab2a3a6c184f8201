#include "hasard/scenarios/scenario.hpp"

#include <cmath>

#include "hasard/core/errors.hpp"
#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

std::unique_ptr<Scenario> make_scenario(const LevelConfig& config, const ScenarioOptions& options) {
  if (options.map_size < 0) throw ConfigError("map_size must be non-negative");
  if (!(options.capacity > 0.0)) throw ConfigError("capacity must be positive");
  switch (config.scenario) {
    case ScenarioId::ArmamentBurden: return std::make_unique<ArmamentBurden>(config, options);
    case ScenarioId::RemedyRush: return std::make_unique<RemedyRush>(config, options);
    case ScenarioId::CollateralDamage: return std::make_unique<CollateralDamage>(config, options);
    case ScenarioId::VolcanicVenture: return std::make_unique<VolcanicVenture>(config, options);
    case ScenarioId::PrecipicePlunge: return std::make_unique<PrecipicePlunge>(config, options);
    case ScenarioId::DetonatorsDilemma: return std::make_unique<DetonatorsDilemma>(config, options);
  }
  throw ConfigError("unknown scenario");
}

bool agent_touches(const World& world, const Entity& e) {
  if (!e.alive) return false;
  const auto& p = world.agent.pose;
  if (std::hypot(p.x - e.x, p.y - e.y) >= kPickupRadius) return false;
  return p.z - e.z < kPickupClearance;
}

TilePredicate free_tile(const World& world, TilePredicate extra) {
  const TileCoord agent_tile = TileGrid::tile_of(world.agent.pose.x, world.agent.pose.y);
  std::vector<char> occupied(static_cast<std::size_t>(world.grid.width()) * world.grid.height(), 0);
  for (const auto& e : world.entities) {
    if (!e.alive) continue;
    const TileCoord c = TileGrid::tile_of(e.x, e.y);
    if (world.grid.in_bounds(c.x, c.y)) occupied[world.grid.index(c.x, c.y)] = 1;
  }
  const TileGrid* grid = &world.grid;
  return [grid, agent_tile, occupied = std::move(occupied), extra = std::move(extra)](int x, int y) {
    if (grid->is_wall(x, y)) return false;
    if (occupied[grid->index(x, y)]) return false;
    if (TileCoord{x, y} == agent_tile) return false;
    return !extra || extra(x, y);
  };
}

}  // namespace hasard::scenarios
