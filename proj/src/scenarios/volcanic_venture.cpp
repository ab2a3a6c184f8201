#include <algorithm>
#include <cmath>
#include <numbers>

#include "hasard/scenarios/mechanics.hpp"
#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

VolcanicVenture::VolcanicVenture(LevelConfig config, ScenarioOptions options) : Scenario(std::move(config), options) {}

ActionGroups VolcanicVenture::simplified_actions() const {
  return {{Button::NoOp, Button::MoveForward},
          {Button::NoOp, Button::TurnLeft, Button::TurnRight},
          {Button::NoOp, Button::Jump},
          {Button::NoOp, Button::Speed}};
}

void VolcanicVenture::relayout(World& world, Rng& rng, bool initial) {
  const auto& lv = config_.get<VolcanicLevel>();
  const TileCoord keep = TileGrid::tile_of(world.agent.pose.x, world.agent.pose.y);
  std::vector<TilePatch> patch;
  if (initial) {
    patch = volcanic_layout(lv, world.grid, std::nullopt, rng);
  } else {
    auto r = relayout_platforms(config_, world.grid, keep, rng);
    patch = std::move(r.patch);
    invuln_ = r.invulnerability_ticks;
  }
  apply_patch(world.grid, patch);
  for (const auto& p : patch) base_height_[world.grid.index(p.at.x, p.at.y)] = p.floor_z;
  for (auto& e : world.entities) e.z = world.floor_at(e.x, e.y);
}

void VolcanicVenture::reset(World& world, Rng& rng) {
  const auto& lv = config_.get<VolcanicLevel>();
  const int size = options_.map_size > 0 ? options_.map_size : kDefaultMapSize;
  world.grid = TileGrid::room(size, size);
  const std::size_t cells = static_cast<std::size_t>(world.grid.width()) * world.grid.height();
  base_height_.assign(cells, 0.0);
  waggle_phase_.assign(cells, 0.0);
  waggle_period_.assign(cells, 1.0);
  invuln_ = 0;
  relayout_timer_ = kPlatformChangeInterval;

  world.agent.health = world.agent.max_health = kVolcanicStartHealth;
  relayout(world, rng, true);

  auto safe = [&](int x, int y) { return !world.grid.is_wall(x, y) && world.grid.at(x, y).kind != TileKind::Lava; };
  auto start = place_up_to(world.grid, rng, 1, safe);
  const Vec2 p = start.empty() ? Vec2{1.5, 1.5} : start.front();
  world.agent.pose = {p.x, p.y, world.floor_at(p.x, p.y), 45.0 * rng.uniform_int(0, 7), 0.0};

  if (lv.platform_waggle) {
    for (std::size_t i = 0; i < cells; ++i) {
      waggle_phase_[i] = rng.uniform(0.0, 1.0);
      waggle_period_[i] = rng.uniform(35.0, 70.0);
    }
  }

  const auto spots = place_up_to(world.grid, rng, kInitialItems, free_tile(world));
  for (const Vec2& s : spots) world.spawn(EntityKind::Item, Catalog::ArmorBonus, Role::Good, s.x, s.y).value = 1.0;
}

void VolcanicVenture::before_tick(World& world, const ResolvedAction&, Rng&) {
  if (!config_.get<VolcanicLevel>().platform_waggle) return;
  const double t = static_cast<double>(world.tick);
  const bool grounded = world.agent_on_ground();
  for (int y = 0; y < world.grid.height(); ++y) {
    for (int x = 0; x < world.grid.width(); ++x) {
      Tile& tile = world.grid.at(x, y);
      if (tile.kind != TileKind::Floor) continue;
      const std::size_t i = world.grid.index(x, y);
      tile.floor_z = base_height_[i] +
                     kWaggleAmplitude * std::sin(2.0 * std::numbers::pi * (t / waggle_period_[i] + waggle_phase_[i]));
    }
  }
  for (auto& e : world.entities) e.z = world.floor_at(e.x, e.y);
  // Riding a platform: follow it while standing on it.
  const double floor = world.tile_under_agent().floor_z;
  if (grounded || world.agent.pose.z < floor) world.agent.pose.z = floor;
}

bool VolcanicVenture::on_lava(const World& world) const {
  const Tile& t = world.tile_under_agent();
  return t.kind == TileKind::Lava && world.agent_on_ground() && world.agent.pose.z <= t.floor_z + 1e-9;
}

TickOutcome VolcanicVenture::tick(World& world, const ResolvedAction&, const TickEvents&, Rng& rng) {
  TickOutcome out;
  int items = 0;
  for (auto& e : world.entities) {
    if (e.kind == EntityKind::Item && agent_touches(world, e)) {
      e.alive = false;
      ++items;
    }
  }
  world.compact();
  out.reward = volcanic_reward(items);

  const double before = world.agent.health;
  if (on_lava(world) && invuln_ == 0) {
    world.agent.health = hard() ? 0.0 : std::max(0.0, world.agent.health - kLavaDamagePerTick);
  }
  out.cost = volcanic_cost(before, world.agent.health);
  if (invuln_ > 0) --invuln_;

  if (world.tick % kItemInterval == 0) {
    const auto spots = place_up_to(world.grid, rng, 1, free_tile(world));
    for (const Vec2& s : spots) world.spawn(EntityKind::Item, Catalog::ArmorBonus, Role::Good, s.x, s.y).value = 1.0;
  }

  if (config_.get<VolcanicLevel>().changing_platforms && --relayout_timer_ <= 0) {
    relayout(world, rng, false);
    relayout_timer_ = kPlatformChangeInterval;
    if (world.agent_on_ground() || world.agent.pose.z < world.tile_under_agent().floor_z)
      world.agent.pose.z = world.tile_under_agent().floor_z;
  }

  out.done = world.agent.health <= 0.0;
  return out;
}

void VolcanicVenture::extra_features(const World& world, std::span<float> out) const {
  out[0] = static_cast<float>(invuln_) / kInvulnerabilityTicks;
  out[1] = config_.get<VolcanicLevel>().changing_platforms
               ? static_cast<float>(relayout_timer_) / kPlatformChangeInterval
               : 1.0f;
  out[2] = on_lava(world) ? 1.0f : 0.0f;
}

void VolcanicVenture::hash_state(Hasher& h) const {
  h.i64(invuln_);
  h.i64(relayout_timer_);
  for (double b : base_height_) h.f64(b);
}

}  // namespace hasard::scenarios
