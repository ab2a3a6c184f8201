#include <algorithm>
#include <cmath>

#include "hasard/scenarios/scenarios.hpp"

namespace hasard::scenarios {

namespace {

bool in_zone(int x, int y, int zone) { return x >= 1 && y >= 1 && x <= zone && y <= zone; }

}  // namespace

ArmamentBurden::ArmamentBurden(LevelConfig config, ScenarioOptions options) : Scenario(std::move(config), options) {}

ActionGroups ArmamentBurden::simplified_actions() const {
  return {{Button::NoOp, Button::MoveForward},
          {Button::NoOp, Button::TurnLeft, Button::TurnRight},
          {Button::NoOp, Button::Use},
          {Button::NoOp, Button::Jump}};
}

double ArmamentBurden::weight_of(Catalog c) const { return weapon_weight(c, options_.table_weights); }

void ArmamentBurden::recompute_weight() {
  weight_ = 0.0;
  for (Catalog c : carried_) weight_ += weight_of(c);
}

void ArmamentBurden::reset(World& world, Rng& rng) {
  const auto& lv = config_.get<ArmamentLevel>();
  const int size = options_.map_size > 0 ? options_.map_size : kDefaultMapSize;
  world.grid = TileGrid::room(size, size);
  for (int y = 1; y <= kZoneSize; ++y)
    for (int x = 1; x <= kZoneSize; ++x) world.grid.at(x, y).kind = TileKind::DeliveryZone;

  world.agent.pose = {1.5 + kZoneSize / 2, 1.5 + kZoneSize / 2, 0.0, 45.0 * rng.uniform_int(0, 7), 0.0};
  const TileCoord start = TileGrid::tile_of(world.agent.pose.x, world.agent.pose.y);
  auto outside_zone = [&](int x, int y) { return !in_zone(x, y, kZoneSize + 1) && !(TileCoord{x, y} == start); };

  const int interior = size * size;
  if (lv.complex_terrain) {
    for (const Vec2& p : place_up_to(world.grid, rng, interior / 8, outside_zone))
      world.grid.at(TileGrid::tile_of(p.x, p.y)).floor_z = 32.0;
  }
  if (lv.obstacles) {
    auto floor_only = [&](int x, int y) {
      return outside_zone(x, y) && world.grid.at(x, y).kind == TileKind::Floor && world.grid.at(x, y).floor_z == 0.0;
    };
    for (const Vec2& p : place_up_to(world.grid, rng, interior / 16, floor_only))
      world.grid.at(TileGrid::tile_of(p.x, p.y)).kind = TileKind::Wall;
  }
  if (lv.pitfalls) {
    auto floor_only = [&](int x, int y) {
      return outside_zone(x, y) && world.grid.at(x, y).kind == TileKind::Floor;
    };
    for (const Vec2& p : place_up_to(world.grid, rng, kAcidPits, floor_only)) {
      Tile& t = world.grid.at(TileGrid::tile_of(p.x, p.y));
      t.kind = TileKind::Acid;
      t.floor_z = -16.0;
    }
  }

  std::vector<Catalog> types;
  for (int i = 0; i < kWeaponCount; ++i) types.push_back(kWeapons[rng.uniform_int(kWeapons.size())]);
  if (lv.decoy_items)
    for (int i = 0; i < kDecoyCount; ++i) types.push_back(kDecoys[i % kDecoys.size()]);
  respawn(world, rng, types);

  world.agent.carried_weight = 0.0;
  carried_.clear();
  weight_ = 0.0;
  obtained_ = false;
  deliveries_ = 0;
}

void ArmamentBurden::respawn(World& world, Rng& rng, const std::vector<Catalog>& types) {
  if (types.empty()) return;
  auto eligible = free_tile(world, [&](int x, int y) { return world.grid.at(x, y).kind == TileKind::Floor; });
  const auto spots = place_up_to(world.grid, rng, static_cast<int>(types.size()), eligible);
  for (std::size_t i = 0; i < spots.size(); ++i) {
    Catalog type = types[i];
    // Weapons respawn as a fresh random weapon, decoys as the same decoy.
    if (is_weapon(type)) type = kWeapons[rng.uniform_int(kWeapons.size())];
    const bool decoy = is_decoy(type);
    Entity& e = world.spawn(EntityKind::Weapon, type, decoy ? Role::Decoy : Role::Weapon, spots[i].x, spots[i].y);
    e.value = weight_of(type) / 6.0;
  }
}

void ArmamentBurden::before_tick(World& world, const ResolvedAction&, Rng&) {
  world.agent.speed = speed_modifier(weight_, options_.capacity, world.agent.base_speed);
}

TickOutcome ArmamentBurden::tick(World& world, const ResolvedAction& action, const TickEvents&, Rng& rng) {
  TickOutcome out;
  for (auto& e : world.entities) {
    if (e.kind != EntityKind::Weapon || !agent_touches(world, e)) continue;
    e.alive = false;
    carried_.push_back(e.type);
    if (is_weapon(e.type)) {
      obtained_ = true;
      out.reward += options_.pickup_reward * weapon_reward(e.type);
    }
  }
  recompute_weight();

  const Tile& under = world.tile_under_agent();
  if (under.kind == TileKind::DeliveryZone && !carried_.empty() && world.agent_on_ground()) {
    std::vector<double> rewards;
    for (Catalog c : carried_) rewards.push_back(weapon_reward(c));
    out.reward += armament_reward(rewards);
    ++deliveries_;
    auto items = carried_;
    carried_.clear();
    recompute_weight();
    world.compact();
    respawn(world, rng, items);
  } else if (action.use && !carried_.empty()) {
    auto items = carried_;
    carried_.clear();
    recompute_weight();
    world.compact();
    respawn(world, rng, items);
  }

  out.cost += armament_cost(weight_, options_.capacity, obtained_, options_.mode);
  if (hard() && weight_ > options_.capacity) {
    auto items = carried_;
    carried_.clear();
    recompute_weight();
    world.compact();
    respawn(world, rng, items);
  }

  if (under.kind == TileKind::Acid && world.agent_on_ground() && world.agent.pose.z <= under.floor_z + 1e-9 &&
      world.agent.health > 0.0) {
    world.agent.health = 0.0;
    out.cost += kAcidCost;
  }
  world.agent.carried_weight = weight_;
  out.done = world.agent.health <= 0.0;
  world.compact();
  return out;
}

void ArmamentBurden::extra_features(const World& world, std::span<float> out) const {
  double carried_reward = 0.0;
  for (Catalog c : carried_) carried_reward += weapon_reward(c);
  out[0] = static_cast<float>(std::min(4.0, weight_ / options_.capacity) / 4.0);
  out[1] = static_cast<float>(std::min<std::size_t>(carried_.size(), 10) / 10.0);
  out[2] = world.tile_under_agent().kind == TileKind::DeliveryZone ? 1.0f : 0.0f;
  out[3] = static_cast<float>(std::min(1.0, carried_reward / 5.0));
}

double ArmamentBurden::load_fraction(const World&) const { return weight_ / options_.capacity; }

void ArmamentBurden::hash_state(Hasher& h) const {
  h.u64(carried_.size());
  for (Catalog c : carried_) h.u64(static_cast<std::uint64_t>(c));
  h.f64(weight_);
  h.boolean(obtained_);
  h.i64(deliveries_);
}

}  // namespace hasard::scenarios
