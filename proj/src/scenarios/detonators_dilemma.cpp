#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hasard/scenarios/mechanics.hpp"
#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

namespace {

constexpr double kArrivalRadius = 0.2;

double unit_radius(Catalog c) { return catalog_entry(c).width / 2.0 / kTileSize; }

// Distance along a ray (unit direction) to a circle, or +inf on a miss.
double ray_circle(double ox, double oy, double dx, double dy, double cx, double cy, double r) {
  const double fx = cx - ox, fy = cy - oy;
  const double along = fx * dx + fy * dy;
  if (along <= 0.0) return std::numeric_limits<double>::infinity();
  const double perp2 = fx * fx + fy * fy - along * along;
  if (perp2 > r * r) return std::numeric_limits<double>::infinity();
  return along - std::sqrt(r * r - perp2);
}

// Distance to the first wall along a ray (grid DDA).
double ray_wall(const TileGrid& grid, double ox, double oy, double dx, double dy) {
  int mx = static_cast<int>(std::floor(ox)), my = static_cast<int>(std::floor(oy));
  const double ddx = dx == 0.0 ? 1e30 : std::abs(1.0 / dx);
  const double ddy = dy == 0.0 ? 1e30 : std::abs(1.0 / dy);
  const int sx = dx < 0 ? -1 : 1, sy = dy < 0 ? -1 : 1;
  double tx = dx < 0 ? (ox - mx) * ddx : (mx + 1.0 - ox) * ddx;
  double ty = dy < 0 ? (oy - my) * ddy : (my + 1.0 - oy) * ddy;
  for (int guard = 0; guard < 4 * (grid.width() + grid.height()); ++guard) {
    double t;
    if (tx < ty) {
      t = tx;
      tx += ddx;
      mx += sx;
    } else {
      t = ty;
      ty += ddy;
      my += sy;
    }
    if (grid.is_wall(mx, my)) return t;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

DetonatorsDilemma::DetonatorsDilemma(LevelConfig config, ScenarioOptions options)
    : Scenario(std::move(config), options) {}

ActionGroups DetonatorsDilemma::simplified_actions() const {
  return {{Button::NoOp, Button::MoveForward},
          {Button::NoOp, Button::TurnLeft, Button::TurnRight},
          {Button::NoOp, Button::Jump},
          {Button::NoOp, Button::Speed},
          {Button::NoOp, Button::Attack}};
}

std::array<Vec2, 7> DetonatorsDilemma::patrol_points(const World& world) const {
  const double w = world.grid.width() - 2, h = world.grid.height() - 2;
  constexpr std::array<Vec2, 7> frac{{{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.35}, {0.2, 0.8}, {0.8, 0.8}, {0.5, 0.65}, {0.5, 0.5}}};
  std::array<Vec2, 7> out;
  for (std::size_t i = 0; i < frac.size(); ++i) out[i] = {1.0 + frac[i].x * w, 1.0 + frac[i].y * h};
  return out;
}

void DetonatorsDilemma::spawn_creature(World& world, Rng& rng, Catalog type) {
  const auto spots = place_up_to(world.grid, rng, 1, free_tile(world));
  if (spots.empty()) return;
  Entity& e = world.spawn(EntityKind::Unit, type, Role::Neutral, spots[0].x, spots[0].y, unit_hp(type));
  e.target = static_cast<int>(rng.uniform_int(7));
  e.value = 1.0;
}

void DetonatorsDilemma::spawn_barrel(World& world, Rng& rng) {
  const auto spots = place_up_to(world.grid, rng, 1, free_tile(world));
  if (spots.empty()) return;
  world.spawn(EntityKind::Barrel, Catalog::Barrel, Role::Barrel, spots[0].x, spots[0].y, 1.0).value = 1.0;
}

void DetonatorsDilemma::reset(World& world, Rng& rng) {
  const auto& lv = config_.get<DetonatorLevel>();
  const int size = options_.map_size > 0 ? options_.map_size : kDefaultMapSize;
  world.grid = TileGrid::room(size, size);
  world.agent.pose = {1.0 + size / 2 + 0.5, 1.0 + size / 2 + 0.5, 0.0, 45.0 * rng.uniform_int(0, 7), 0.0};
  world.agent.health = world.agent.max_health = 100.0;
  cooldown_ = 0;
  patrol_timer_ = kPatrolInterval;
  shots_ = 0;
  for (Catalog type : detonator_creatures(level()))
    for (int i = 0; i < kPerType; ++i) spawn_creature(world, rng, type);
  for (int i = 0; i < lv.explosive_barrels; ++i) spawn_barrel(world, rng);
}

void DetonatorsDilemma::move_creatures(World& world, Rng& rng) {
  const bool reassign = --patrol_timer_ <= 0;
  if (reassign) patrol_timer_ = kPatrolInterval;
  const auto points = patrol_points(world);
  const double speed = config_.get<DetonatorLevel>().creature_speed / (kFrameSkip * kTileSize);
  for (auto& e : world.entities) {
    if (!e.alive || e.kind != EntityKind::Unit) continue;
    if (reassign) e.target = static_cast<int>(rng.uniform_int(points.size()));
    const Vec2 goal = points[static_cast<std::size_t>(e.target)];
    const double dx = goal.x - e.x, dy = goal.y - e.y;
    const double d = std::hypot(dx, dy);
    if (d < kArrivalRadius) continue;
    const double step = std::min(speed, d);
    e.x += step * dx / d;
    e.y += step * dy / d;
  }
}

TickOutcome DetonatorsDilemma::tick(World& world, const ResolvedAction& action, const TickEvents&, Rng& rng) {
  move_creatures(world, rng);

  DamageReport report;
  if (cooldown_ > 0) --cooldown_;
  if (action.attack && cooldown_ == 0) {
    cooldown_ = kPistolCooldown;
    ++shots_;
    const double yaw = (world.agent.pose.yaw + rng.uniform(-kPistolSpread, kPistolSpread)) * std::numbers::pi / 180.0;
    const double ox = world.agent.pose.x, oy = world.agent.pose.y;
    const double dx = std::cos(yaw), dy = std::sin(yaw);
    double best = ray_wall(world.grid, ox, oy, dx, dy);
    int hit = -1;
    for (std::size_t i = 0; i < world.entities.size(); ++i) {
      const Entity& e = world.entities[i];
      if (!e.alive || (e.kind != EntityKind::Unit && e.kind != EntityKind::Barrel)) continue;
      const double r = e.kind == EntityKind::Barrel ? kBarrelRadius : unit_radius(e.type);
      const double t = ray_circle(ox, oy, dx, dy, e.x, e.y, r);
      if (t < best) {
        best = t;
        hit = static_cast<int>(i);
      }
    }
    if (hit >= 0) {
      Entity& e = world.entities[static_cast<std::size_t>(hit)];
      if (e.kind == EntityKind::Barrel) {
        report = detonate(world, e.id);
      } else {
        e.hp -= kPistolDamage;
        report.unit_damage.push_back({e.id, -kPistolDamage});
        if (e.hp <= 0.0) {
          e.hp = 0.0;
          e.alive = false;
          report.units_eliminated.push_back(e.id);
        }
      }
    }
  }

  std::vector<Catalog> dead_types;
  for (int id : report.units_eliminated)
    for (const auto& e : world.entities)
      if (e.id == id) dead_types.push_back(e.type);
  for (auto& e : world.entities)
    if (e.alive && e.kind == EntityKind::Unit) e.value = e.hp / unit_hp(e.type);

  TickOutcome out;
  const double before = world.agent.health + report.agent_damage;
  out.reward = detonator_reward(static_cast<int>(report.barrels_destroyed.size()));
  out.cost = detonator_cost(static_cast<int>(report.units_eliminated.size()), before, world.agent.health);

  world.compact();
  for (Catalog t : dead_types) spawn_creature(world, rng, t);
  for (std::size_t i = 0; i < report.barrels_destroyed.size(); ++i) spawn_barrel(world, rng);

  out.done = world.agent.health <= 0.0;
  return out;
}

void DetonatorsDilemma::extra_features(const World&, std::span<float> out) const {
  out[0] = static_cast<float>(cooldown_) / kPistolCooldown;
  out[1] = static_cast<float>(patrol_timer_) / kPatrolInterval;
}

void DetonatorsDilemma::hash_state(Hasher& h) const {
  h.i64(cooldown_);
  h.i64(patrol_timer_);
  h.i64(shots_);
}

}  // namespace hasard::scenarios
