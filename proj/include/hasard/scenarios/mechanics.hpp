#pragma once

#include <optional>
#include <vector>

#include "hasard/core/world.hpp"
#include "hasard/scenarios/level_config.hpp"

namespace hasard::scenarios {

// ---- explosions -----------------------------------------------------------------

/// Radial blast with linear falloff: damage * (1 - dist / radius) inside radius.
struct BlastModel {
  double radius = 2.0;   // tiles
  double damage = 60.0;  // HP at the centre
};

struct UnitDamage {
  int entity_id;
  double hp_delta;  // negative
};

struct DamageReport {
  std::vector<int> barrels_destroyed;  // entity ids, detonation order
  std::vector<UnitDamage> unit_damage;
  std::vector<int> units_eliminated;  // entity ids
  double agent_damage = 0.0;

  bool empty() const { return unit_damage.empty() && units_eliminated.empty() && agent_damage == 0.0; }
};

/// Applies one blast centred at (x, y) to the agent (when `hurts_agent`) and
/// all live units. Does not touch barrels.
void apply_blast(World& world, double x, double y, const BlastModel& blast, bool hurts_agent, DamageReport& report);

/// Explodes the barrel with entity id `barrel_id` and every barrel reachable
/// through the chain "inside the blast radius of an exploding barrel".
DamageReport detonate(World& world, int barrel_id, const BlastModel& blast = {});

// ---- platforms --------------------------------------------------------------------

struct TilePatch {
  TileCoord at;
  TileKind kind;
  double floor_z;
};

struct PlatformRelayout {
  std::vector<TilePatch> patch;
  int invulnerability_ticks = 0;
};

inline constexpr int kInvulnerabilityTicks = 35;
inline constexpr int kPlatformChangeInterval = 350;
inline constexpr double kLavaFloor = 0.0;
inline constexpr double kPlatformBase = 8.0;

/// Volcanic Venture lava/platform layout over the grid interior. Always
/// generates (used at reset).
std::vector<TilePatch> volcanic_layout(const VolcanicLevel& level, const TileGrid& grid,
                                       std::optional<TileCoord> keep_safe, Rng& rng);

/// Precipice Plunge row heights: row k (interior y - 1) sits at -k * delta,
/// plus rand[-delta/2, delta/2] per tile when the terrain is randomized.
std::vector<TilePatch> precipice_layout(const PrecipiceLevel& level, const TileGrid& grid, Rng& rng);

/// Re-randomises platforms on levels that change them. Level-1 Volcanic and
/// non-randomised Precipice return an empty patch.
PlatformRelayout relayout_platforms(const LevelConfig& config, const TileGrid& grid,
                                    std::optional<TileCoord> keep_safe, Rng& rng);

void apply_patch(TileGrid& grid, const std::vector<TilePatch>& patch);

}  // namespace hasard::scenarios
