#include <algorithm>
#include <cmath>
#include <numbers>

#include "hasard/env/env.hpp"

namespace hasard::env {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kRayAngles[kRayCount] = {-60.0, -30.0, 0.0, 30.0, 60.0};

double ray_to_wall(const TileGrid& grid, double ox, double oy, double dx, double dy, double max_t) {
  int mx = static_cast<int>(std::floor(ox)), my = static_cast<int>(std::floor(oy));
  const double ddx = dx == 0.0 ? 1e30 : std::abs(1.0 / dx);
  const double ddy = dy == 0.0 ? 1e30 : std::abs(1.0 / dy);
  const int sx = dx < 0 ? -1 : 1, sy = dy < 0 ? -1 : 1;
  double tx = dx < 0 ? (ox - mx) * ddx : (mx + 1.0 - ox) * ddx;
  double ty = dy < 0 ? (oy - my) * ddy : (my + 1.0 - oy) * ddy;
  for (;;) {
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
    if (t >= max_t) return max_t;
    if (grid.is_wall(mx, my)) return t;
  }
}

}  // namespace

int feature_size(const scenarios::Scenario& scenario) {
  return kCommonFeatures + kRayCount + kPatchFeatures + kEntityFeatures + scenario.extra_feature_count();
}

void feature_observation(const World& world, const scenarios::Scenario& scenario, std::span<float> out) {
  std::fill(out.begin(), out.end(), 0.0f);
  const AgentState& ag = world.agent;
  const Pose& p = ag.pose;
  const TileGrid& grid = world.grid;
  const double yaw = p.yaw * kDeg;
  const double fx = std::cos(yaw), fy = std::sin(yaw);
  const double rx = fy, ry = -fx;
  const double span = std::max(grid.width(), grid.height());

  std::size_t k = 0;
  out[k++] = static_cast<float>(std::sin(yaw));
  out[k++] = static_cast<float>(std::cos(yaw));
  out[k++] = static_cast<float>(p.x / grid.width());
  out[k++] = static_cast<float>(p.y / grid.height());
  out[k++] = static_cast<float>(std::clamp(p.z / 256.0, -4.0, 4.0));
  out[k++] = static_cast<float>(ag.max_health > 0 ? ag.health / ag.max_health : 0.0);
  out[k++] = static_cast<float>(std::min(scenario.load_fraction(world), 4.0) / 4.0);
  out[k++] = ag.airborne ? 1.0f : 0.0f;
  out[k++] = static_cast<float>(std::min(ag.speed / ag.base_speed, 2.0) / 2.0);

  for (double a : kRayAngles) {
    const double ang = yaw + a * kDeg;
    out[k++] = static_cast<float>(ray_to_wall(grid, p.x, p.y, std::cos(ang), std::sin(ang), span) / span);
  }

  for (int i = -kPatchRadius; i <= kPatchRadius; ++i) {
    for (int j = -kPatchRadius; j <= kPatchRadius; ++j) {
      const double sx = p.x + i * fx + j * rx, sy = p.y + i * fy + j * ry;
      const TileCoord c = TileGrid::tile_of(sx, sy);
      if (grid.is_wall(c.x, c.y)) {
        out[k] = 0.0f;
        out[k + 1] = 1.0f;
        out[k + 2] = 0.0f;
      } else {
        const Tile& t = grid.at(c);
        out[k] = (t.kind == TileKind::Lava || t.kind == TileKind::Acid) ? 1.0f : 0.0f;
        out[k + 1] = 0.0f;
        out[k + 2] = static_cast<float>(std::clamp((t.floor_z - p.z) / 128.0, -2.0, 2.0));
      }
      k += kPatchChannels;
    }
  }

  struct Near {
    double dist;
    int id;
    const Entity* e;
  };
  std::vector<Near> near;
  near.reserve(world.entities.size());
  for (const auto& e : world.entities) {
    if (!e.alive || !scenario.entity_visible(world, e)) continue;
    near.push_back({std::hypot(e.x - p.x, e.y - p.y) * kTileSize, e.id, &e});
  }
  const std::size_t n = std::min<std::size_t>(near.size(), kEntitySlots);
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(n), near.end(),
                    [](const Near& a, const Near& b) { return a.dist < b.dist || (a.dist == b.dist && a.id < b.id); });
  for (std::size_t s = 0; s < n; ++s) {
    const Entity& e = *near[s].e;
    const std::size_t base = k + s * kEntitySlotWidth;
    const double rel = std::atan2(e.y - p.y, e.x - p.x) - yaw;
    out[base] = 1.0f;
    out[base + 1] = static_cast<float>(near[s].dist / kFeatureDistanceScale);
    out[base + 2] = static_cast<float>(std::sin(rel));
    out[base + 3] = static_cast<float>(std::cos(rel));
    out[base + 4 + static_cast<std::size_t>(e.role)] = 1.0f;
    out[base + 4 + kRoleCount] = static_cast<float>(e.value);
  }
  k += kEntityFeatures;

  scenario.extra_features(world, out.subspan(k));
}

}  // namespace hasard::env
