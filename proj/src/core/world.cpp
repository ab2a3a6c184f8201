#include "hasard/core/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hasard/core/errors.hpp"

namespace hasard {

TileGrid::TileGrid(int width, int height, Tile fill)
    : width_(width), height_(height), tiles_(static_cast<std::size_t>(width) * height, fill) {}

TileGrid TileGrid::room(int interior_width, int interior_height, Tile floor) {
  TileGrid g(interior_width + 2, interior_height + 2, floor);
  for (int x = 0; x < g.width_; ++x) {
    g.at(x, 0).kind = TileKind::Wall;
    g.at(x, g.height_ - 1).kind = TileKind::Wall;
  }
  for (int y = 0; y < g.height_; ++y) {
    g.at(0, y).kind = TileKind::Wall;
    g.at(g.width_ - 1, y).kind = TileKind::Wall;
  }
  return g;
}

TileCoord TileGrid::tile_of(double x, double y) {
  return {static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))};
}

bool TileGrid::has_wall_border() const {
  for (int x = 0; x < width_; ++x)
    if (at(x, 0).kind != TileKind::Wall || at(x, height_ - 1).kind != TileKind::Wall) return false;
  for (int y = 0; y < height_; ++y)
    if (at(0, y).kind != TileKind::Wall || at(width_ - 1, y).kind != TileKind::Wall) return false;
  return true;
}

bool TileGrid::valid_heights() const {
  return std::all_of(tiles_.begin(), tiles_.end(), [](const Tile& t) {
    return t.kind == TileKind::Wall || t.floor_z <= t.ceiling_z;
  });
}

Entity& World::spawn(EntityKind kind, Catalog type, Role role, double x, double y, double hp) {
  Entity e;
  e.id = next_entity_id++;
  e.kind = kind;
  e.type = type;
  e.role = role;
  e.x = x;
  e.y = y;
  e.z = floor_at(x, y);
  e.hp = hp;
  entities.push_back(e);
  return entities.back();
}

double World::floor_at(double x, double y) const {
  const TileCoord c = TileGrid::tile_of(x, y);
  if (grid.is_wall(c.x, c.y)) return std::numeric_limits<double>::infinity();
  return grid.at(c).floor_z;
}

const Tile& World::tile_under_agent() const {
  return grid.at(TileGrid::tile_of(agent.pose.x, agent.pose.y));
}

bool World::agent_on_ground() const {
  return !agent.airborne;
}

void World::compact() {
  std::erase_if(entities, [](const Entity& e) { return !e.alive; });
}

double wrap_degrees(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

namespace {

// Highest floor under the agent's footprint, or +inf if it touches a wall.
double footprint_floor(const TileGrid& grid, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x - kAgentRadius));
  const int x1 = static_cast<int>(std::floor(x + kAgentRadius));
  const int y0 = static_cast<int>(std::floor(y - kAgentRadius));
  const int y1 = static_cast<int>(std::floor(y + kAgentRadius));
  double top = -std::numeric_limits<double>::infinity();
  for (int ty = y0; ty <= y1; ++ty) {
    for (int tx = x0; tx <= x1; ++tx) {
      if (grid.is_wall(tx, ty)) return std::numeric_limits<double>::infinity();
      top = std::max(top, grid.at(tx, ty).floor_z);
    }
  }
  return top;
}

bool can_occupy(const TileGrid& grid, double x, double y, double z) {
  return footprint_floor(grid, x, y) <= z + kStepHeight;
}

}  // namespace

TickEvents tick_physics(World& world, const ResolvedAction& a) {
  AgentState& ag = world.agent;
  Pose& p = ag.pose;
  TickEvents ev;
  ev.z_before = p.z;

  if (a.turn_left != a.turn_right) p.yaw = wrap_degrees(p.yaw + (a.turn_left ? kTurnRate : -kTurnRate));
  if (a.look_up != a.look_down)
    p.pitch = std::clamp(p.pitch + (a.look_up ? kLookRate : -kLookRate), -kPitchLimit, kPitchLimit);
  ag.crouched = a.crouch;

  if (ag.can_move) {
    const double rad = p.yaw * std::numbers::pi / 180.0;
    const double fx = std::cos(rad), fy = std::sin(rad);
    // right-hand vector (yaw - 90)
    const double rx = fy, ry = -fx;
    double mf = (a.forward ? 1.0 : 0.0) - (a.backward ? 1.0 : 0.0);
    double ms = (a.strafe_right ? 1.0 : 0.0) - (a.strafe_left ? 1.0 : 0.0);
    if (mf != 0.0 || ms != 0.0) {
      if (mf != 0.0 && ms != 0.0) {
        mf *= std::numbers::sqrt2 / 2.0;
        ms *= std::numbers::sqrt2 / 2.0;
      }
      double v = ag.speed;
      if (a.speed) v *= 2.0;
      if (ag.crouched) v *= 0.5;
      const double dx = v * (mf * fx + ms * rx);
      const double dy = v * (mf * fy + ms * ry);
      const double x0 = p.x, y0 = p.y;
      if (dx != 0.0 && can_occupy(world.grid, p.x + dx, p.y, p.z)) p.x += dx;
      if (dy != 0.0 && can_occupy(world.grid, p.x, p.y + dy, p.z)) p.y += dy;
      ev.moved = (p.x != x0 || p.y != y0);
      ev.blocked = (p.x != x0 + dx || p.y != y0 + dy);
    }
  }

  const double floor = footprint_floor(world.grid, p.x, p.y);

  if (!ag.airborne) {
    if (p.z < floor) {
      p.z = floor;  // floor rose under the agent
    } else if (p.z > floor) {
      ag.airborne = true;
      ag.vz = 0.0;
      ag.fall_origin_z = p.z;
    } else if (a.jump && ag.can_move) {
      ag.airborne = true;
      ag.vz = kJumpImpulse;
      ag.fall_origin_z = p.z;
    }
  }

  if (ag.airborne) {
    p.z += ag.vz;
    ag.vz -= kGravity;
    ag.fall_origin_z = std::max(ag.fall_origin_z, p.z);
    if (p.z <= floor) {
      p.z = floor;
      ag.airborne = false;
      ag.vz = 0.0;
      ev.landed = true;
      ev.fall_distance = ag.fall_origin_z - floor;
      ag.fall_origin_z = floor;
    }
  }

  ev.z_after = p.z;
  ++world.tick;
  return ev;
}

double compute_fall_damage(double d) {
  constexpr double kThreshold = 96.0;
  constexpr double kMultiplier = 0.1;
  return d > kThreshold ? (d - kThreshold) * kMultiplier : 0.0;
}

std::vector<Vec2> place_randomly(const TileGrid& grid, Rng& rng, int n, const TilePredicate& eligible) {
  if (n <= 0) return {};
  int available = 0;
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (eligible(x, y)) ++available;
  if (available < n)
    throw InsufficientSpace("place_randomly: " + std::to_string(n) + " requested, " +
                            std::to_string(available) + " eligible tiles");

  std::vector<char> taken(static_cast<std::size_t>(grid.width()) * grid.height(), 0);
  std::vector<Vec2> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    const int x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(grid.width())));
    const int y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(grid.height())));
    const std::size_t i = grid.index(x, y);
    if (taken[i] || !eligible(x, y)) continue;
    taken[i] = 1;
    out.push_back({x + 0.5, y + 0.5});
  }
  return out;
}

std::vector<Vec2> place_up_to(const TileGrid& grid, Rng& rng, int n, const TilePredicate& eligible) {
  int available = 0;
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (eligible(x, y)) ++available;
  return place_randomly(grid, rng, std::min(n, available), eligible);
}

}  // namespace hasard
