#include <algorithm>
#include <cmath>
#include <numbers>

#include "hasard/scenarios/mechanics.hpp"
#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

namespace {

constexpr double kPillarBaseTicks = 4200.0;
constexpr double kFluctuationPeriod = 140.0;  // ticks

}  // namespace

PrecipicePlunge::PrecipicePlunge(LevelConfig config, ScenarioOptions options) : Scenario(std::move(config), options) {}

ActionGroups PrecipicePlunge::simplified_actions() const {
  return {{Button::NoOp, Button::MoveForward, Button::MoveBackward},
          {Button::NoOp, Button::TurnLeft, Button::TurnRight},
          {Button::NoOp, Button::LookUp, Button::LookDown},
          {Button::NoOp, Button::Jump}};
}

double PrecipicePlunge::max_depth() const {
  return std::max(1.0, (kRows - 1) * static_cast<double>(config_.get<PrecipiceLevel>().step_decrement));
}

void PrecipicePlunge::reset(World& world, Rng& rng) {
  const auto& lv = config_.get<PrecipiceLevel>();
  world.grid = TileGrid::room(kWidth, kRows);
  const auto patch = precipice_layout(lv, world.grid, rng);
  apply_patch(world.grid, patch);
  for (int y = 0; y < world.grid.height(); ++y)
    for (int x = 0; x < world.grid.width(); ++x) world.grid.at(x, y).ceiling_z = 128.0;

  const std::size_t cells = static_cast<std::size_t>(world.grid.width()) * world.grid.height();
  base_height_.assign(cells, 0.0);
  pillar_amp_.assign(cells, 0.0);
  pillar_period_.assign(cells, 1.0);
  pillar_phase_.assign(cells, 0.0);
  for (const auto& p : patch) base_height_[world.grid.index(p.at.x, p.at.y)] = p.floor_z;
  if (lv.moving_pillars) {
    for (const auto& p : patch) {
      if (p.at.y <= 1) continue;
      const std::size_t i = world.grid.index(p.at.x, p.at.y);
      pillar_amp_[i] = rng.uniform(128.0, 512.0) / 2.0;
      pillar_period_[i] = kPillarBaseTicks / rng.uniform_int(12, 24);
      pillar_phase_[i] = rng.uniform(0.0, 1.0);
    }
  }

  world.agent.pose = {1.0 + kWidth / 2.0, 1.5, 0.0, 90.0, 0.0};
  world.agent.fall_origin_z = 0.0;
  prev_z_ = 0.0;
  footing_z_ = 0.0;
  world.brightness = 1.0;
}

void PrecipicePlunge::before_tick(World& world, const ResolvedAction&, Rng&) {
  const auto& lv = config_.get<PrecipiceLevel>();
  const double t = static_cast<double>(world.tick);
  if (lv.moving_pillars) {
    for (int y = 2; y < world.grid.height() - 1; ++y) {
      for (int x = 1; x < world.grid.width() - 1; ++x) {
        const std::size_t i = world.grid.index(x, y);
        world.grid.at(x, y).floor_z =
            base_height_[i] + pillar_amp_[i] * std::sin(2.0 * std::numbers::pi * (t / pillar_period_[i] + pillar_phase_[i]));
      }
    }
    // A rising pillar lifts the agent; a sinking one is handled as a fall.
    const double floor = world.tile_under_agent().floor_z;
    if (world.agent.pose.z < floor) world.agent.pose.z = floor;
  }
  // Deeper is darker; the fluctuation modulates on top.
  const double depth = std::clamp(-world.agent.pose.z / max_depth(), 0.0, 1.0);
  const double wave = 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * t / kFluctuationPeriod));
  world.brightness = std::clamp((1.0 - 0.6 * depth) * (1.0 - lv.darkness_fluctuation / 100.0 * wave), 0.05, 1.0);
}

TickOutcome PrecipicePlunge::tick(World& world, const ResolvedAction& action, const TickEvents& events, Rng&) {
  TickOutcome out;
  const double before = world.agent.health;
  if (events.landed) world.agent.health = std::max(0.0, world.agent.health - compute_fall_damage(events.fall_distance));
  out.cost = precipice_cost(before, world.agent.health);
  const TileCoord c = TileGrid::tile_of(world.agent.pose.x, world.agent.pose.y);
  const bool bottom = c.y == kRows && world.agent_on_ground();
  if (!world.agent.airborne) footing_z_ = world.agent.pose.z;
  out.done = world.agent.health <= 0.0 || bottom || action.use;
  return out;
}

TickOutcome PrecipicePlunge::end_step(World& world) {
  TickOutcome out;
  // Only new depth pays: measured at the footing (a jump in place earns
  // nothing) against the deepest footing so far (climbing back up and
  // re-descending earns nothing).
  const double z = world.agent.airborne ? footing_z_ : world.agent.pose.z;
  out.reward = precipice_reward(prev_z_, z);
  prev_z_ = std::min(prev_z_, z);
  return out;
}

void PrecipicePlunge::extra_features(const World& world, std::span<float> out) const {
  const TileCoord c = TileGrid::tile_of(world.agent.pose.x, world.agent.pose.y);
  out[0] = static_cast<float>(std::clamp(-world.agent.pose.z / max_depth(), -1.0, 2.0));
  out[1] = static_cast<float>(c.y - 1) / (kRows - 1);
  out[2] = static_cast<float>(std::clamp(world.agent.vz / 16.0, -4.0, 1.0));
  out[3] = world.agent.airborne ? 1.0f : 0.0f;
}

void PrecipicePlunge::hash_state(Hasher& h) const {
  h.f64(prev_z_);
  h.f64(footing_z_);
  for (double b : base_height_) h.f64(b);
}

}  // namespace hasard::scenarios
