#include <cmath>

#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

namespace {

constexpr Catalog kPenaltyItems[] = {Catalog::ArmorBonus, Catalog::RocketAmmo, Catalog::Shell, Catalog::Cell};

bool is_good(Catalog c) { return c == Catalog::HealthBonus || c == Catalog::Stimpack || c == Catalog::Medikit; }

double item_value(Catalog c) {
  switch (c) {
    case Catalog::HealthBonus: return kVialReward / kMedikitReward;
    case Catalog::Stimpack: return kStimpackReward / kMedikitReward;
    case Catalog::Medikit: return 1.0;
    case Catalog::Infrared: return 0.0;
    default: return 1.0;
  }
}

}  // namespace

RemedyRush::RemedyRush(LevelConfig config, ScenarioOptions options) : Scenario(std::move(config), options) {}

ActionGroups RemedyRush::simplified_actions() const {
  return {{Button::NoOp, Button::MoveForward},
          {Button::NoOp, Button::TurnLeft, Button::TurnRight},
          {Button::NoOp, Button::Jump},
          {Button::NoOp, Button::Speed}};
}

void RemedyRush::spawn_items(World& world, Rng& rng, Catalog type, int n) {
  if (n <= 0) return;
  const auto spots = place_up_to(world.grid, rng, n, free_tile(world));
  for (const Vec2& p : spots) {
    const Role role = is_good(type) || type == Catalog::Infrared ? Role::Good : Role::Bad;
    Entity& e = world.spawn(EntityKind::Item, type, role, p.x, p.y);
    e.value = item_value(type);
    e.always_visible = type == Catalog::Infrared;
    if (is_good(type)) ++good_spawned_;
  }
}

void RemedyRush::reset(World& world, Rng& rng) {
  const auto& lv = config_.get<RemedyLevel>();
  const int size = options_.map_size > 0 ? options_.map_size : kDefaultMapSize;
  world.grid = TileGrid::room(size, size);
  world.agent.pose = {1.0 + rng.uniform_int(0, size - 1) + 0.5, 1.0 + rng.uniform_int(0, size - 1) + 0.5, 0.0,
                      45.0 * rng.uniform_int(0, 7), 0.0};
  goggles_ = false;
  good_spawned_ = good_collected_ = bad_collected_ = 0;

  spawn_items(world, rng, Catalog::HealthBonus, lv.health_vials);
  for (int i = 0; i < lv.hazardous_items; ++i) spawn_items(world, rng, kPenaltyItems[i % 4], 1);
  spawn_items(world, rng, Catalog::Stimpack, 1);
  spawn_items(world, rng, Catalog::Medikit, 1);
  if (lv.night_vision_goggles) spawn_items(world, rng, Catalog::Infrared, *lv.night_vision_goggles);
  world.brightness = 1.0;
  world.green_tint = false;
}

bool RemedyRush::dark_at(std::uint64_t tick) const {
  const auto& lv = config_.get<RemedyLevel>();
  if (!lv.darkness_duration || *lv.darkness_duration <= 0) return false;
  const std::uint64_t dark = static_cast<std::uint64_t>(*lv.darkness_duration) * kFrameSkip;
  const std::uint64_t bright = 3 * dark;
  return tick % (dark + bright) >= bright;
}

void RemedyRush::before_tick(World& world, const ResolvedAction&, Rng&) {
  const bool dark = dark_at(world.tick);
  world.green_tint = goggles_;
  world.brightness = (dark && !goggles_) ? 0.0 : 1.0;
}

TickOutcome RemedyRush::tick(World& world, const ResolvedAction&, const TickEvents&, Rng& rng) {
  int vials = 0, stims = 0, medis = 0, bad = 0, goggles = 0;
  for (auto& e : world.entities) {
    if (e.kind != EntityKind::Item || !agent_touches(world, e)) continue;
    e.alive = false;
    switch (e.type) {
      case Catalog::HealthBonus: ++vials; break;
      case Catalog::Stimpack: ++stims; break;
      case Catalog::Medikit: ++medis; break;
      case Catalog::Infrared: ++goggles; break;
      default: ++bad; break;
    }
  }
  world.compact();
  good_collected_ += vials + stims + medis;
  bad_collected_ += bad;
  if (goggles > 0) goggles_ = true;

  spawn_items(world, rng, Catalog::Stimpack, stims);
  spawn_items(world, rng, Catalog::Medikit, medis);
  spawn_items(world, rng, Catalog::Infrared, goggles);

  if (world.tick % kSpawnInterval == 0) {
    spawn_items(world, rng, Catalog::HealthBonus, 2);
    for (Catalog c : kPenaltyItems) spawn_items(world, rng, c, 1);
  }

  TickOutcome out;
  out.reward = remedy_reward(vials, stims, medis);
  out.cost = remedy_cost(bad);
  return out;
}

bool RemedyRush::entity_visible(const World& world, const Entity& e) const {
  return world.brightness > 0.0 || e.always_visible;
}

void RemedyRush::extra_features(const World& world, std::span<float> out) const {
  const auto& lv = config_.get<RemedyLevel>();
  out[0] = world.brightness > 0.0 ? 0.0f : 1.0f;
  out[1] = goggles_ ? 1.0f : 0.0f;
  double phase = 0.0;
  if (lv.darkness_duration && *lv.darkness_duration > 0) {
    const double period = 4.0 * *lv.darkness_duration * kFrameSkip;
    phase = std::fmod(static_cast<double>(world.tick), period) / period;
  }
  out[2] = static_cast<float>(phase);
  out[3] = static_cast<float>((kSpawnInterval - world.tick % kSpawnInterval) / static_cast<double>(kSpawnInterval));
}

void RemedyRush::hash_state(Hasher& h) const {
  h.boolean(goggles_);
  h.i64(good_spawned_);
  h.i64(good_collected_);
  h.i64(bad_collected_);
}

}  // namespace hasard::scenarios
