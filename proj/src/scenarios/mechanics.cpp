#include "hasard/scenarios/mechanics.hpp"

#include <cmath>
#include <deque>
#include <numeric>

namespace hasard::scenarios {

namespace {

double dist2d(double ax, double ay, double bx, double by) { return std::hypot(ax - bx, ay - by); }

Entity* find_entity(World& world, int id) {
  for (auto& e : world.entities)
    if (e.id == id) return &e;
  return nullptr;
}

}  // namespace

void apply_blast(World& world, double x, double y, const BlastModel& blast, bool hurts_agent, DamageReport& report) {
  if (hurts_agent && world.agent.health > 0.0) {
    const double d = dist2d(x, y, world.agent.pose.x, world.agent.pose.y);
    if (d < blast.radius) {
      const double dmg = std::min(world.agent.health, blast.damage * (1.0 - d / blast.radius));
      world.agent.health -= dmg;
      report.agent_damage += dmg;
    }
  }
  for (auto& e : world.entities) {
    if (!e.alive || e.kind != EntityKind::Unit) continue;
    const double d = dist2d(x, y, e.x, e.y);
    if (d >= blast.radius) continue;
    const double dmg = blast.damage * (1.0 - d / blast.radius);
    if (dmg <= 0.0) continue;
    e.hp -= dmg;
    report.unit_damage.push_back({e.id, -dmg});
    if (e.hp <= 0.0) {
      e.hp = 0.0;
      e.alive = false;
      report.units_eliminated.push_back(e.id);
    }
  }
}

DamageReport detonate(World& world, int barrel_id, const BlastModel& blast) {
  DamageReport report;
  Entity* first = find_entity(world, barrel_id);
  if (first == nullptr || !first->alive || first->kind != EntityKind::Barrel) return report;

  std::deque<int> pending{barrel_id};
  first->alive = false;
  while (!pending.empty()) {
    const int id = pending.front();
    pending.pop_front();
    const Entity* b = find_entity(world, id);
    const double bx = b->x, by = b->y;
    report.barrels_destroyed.push_back(id);
    apply_blast(world, bx, by, blast, true, report);
    for (auto& other : world.entities) {
      if (!other.alive || other.kind != EntityKind::Barrel) continue;
      if (dist2d(bx, by, other.x, other.y) < blast.radius) {
        other.alive = false;
        pending.push_back(other.id);
      }
    }
  }
  return report;
}

namespace {

std::vector<TileCoord> interior_tiles(const TileGrid& grid) {
  std::vector<TileCoord> out;
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (!grid.is_wall(x, y)) out.push_back({x, y});
  return out;
}

}  // namespace

std::vector<TilePatch> volcanic_layout(const VolcanicLevel& level, const TileGrid& grid,
                                       std::optional<TileCoord> keep_safe, Rng& rng) {
  std::vector<TileCoord> tiles = interior_tiles(grid);
  const std::size_t n = tiles.size();
  const auto n_lava = static_cast<std::size_t>(std::lround(level.lava_coverage_percent * static_cast<double>(n) / 100.0));

  for (std::size_t i = n; i > 1; --i) std::swap(tiles[i - 1], tiles[rng.uniform_int(i)]);

  if (keep_safe && n_lava < n) {
    for (std::size_t i = 0; i < n_lava; ++i) {
      if (tiles[i] == *keep_safe) {
        std::swap(tiles[i], tiles[n_lava]);
        break;
      }
    }
  }

  std::vector<TilePatch> patch;
  patch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_lava) {
      patch.push_back({tiles[i], TileKind::Lava, kLavaFloor});
    } else {
      const double h = level.random_platform_height ? kPlatformBase * static_cast<double>(rng.uniform_int(1, 6))
                                                    : kPlatformBase;
      patch.push_back({tiles[i], TileKind::Floor, h});
    }
  }
  return patch;
}

std::vector<TilePatch> precipice_layout(const PrecipiceLevel& level, const TileGrid& grid, Rng& rng) {
  std::vector<TilePatch> patch;
  const double delta = level.step_decrement;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.is_wall(x, y)) continue;
      const int k = y - 1;
      double h = -k * delta;
      if (level.randomized_terrain && k > 0) h += rng.uniform(-delta / 2.0, delta / 2.0);
      patch.push_back({{x, y}, TileKind::Floor, h});
    }
  }
  return patch;
}

PlatformRelayout relayout_platforms(const LevelConfig& config, const TileGrid& grid,
                                    std::optional<TileCoord> keep_safe, Rng& rng) {
  PlatformRelayout out;
  if (config.scenario == ScenarioId::VolcanicVenture) {
    const auto& lv = config.get<VolcanicLevel>();
    if (!lv.changing_platforms) return out;
    out.patch = volcanic_layout(lv, grid, keep_safe, rng);
    out.invulnerability_ticks = kInvulnerabilityTicks;
  } else if (config.scenario == ScenarioId::PrecipicePlunge) {
    const auto& lv = config.get<PrecipiceLevel>();
    if (!lv.randomized_terrain) return out;
    out.patch = precipice_layout(lv, grid, rng);
  }
  return out;
}

void apply_patch(TileGrid& grid, const std::vector<TilePatch>& patch) {
  for (const auto& p : patch) {
    Tile& t = grid.at(p.at);
    t.kind = p.kind;
    t.floor_z = p.floor_z;
    if (t.ceiling_z < t.floor_z) t.ceiling_z = t.floor_z + 128.0;
  }
}

}  // namespace hasard::scenarios
